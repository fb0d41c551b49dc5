//! Conjugacy classes, power maps and the inverse-class map.

use serde::Serialize;

use super::table::GroupTable;
use crate::numtheory::lcm;

/// Conjugacy classes of a [`GroupTable`], ordered by representative index.
/// Class 0 is the identity class.
#[derive(Clone, Debug, Serialize)]
pub struct ClassData {
    pub order: u64,
    pub representatives: Vec<u32>,
    pub sizes: Vec<u64>,
    #[serde(skip)]
    pub class_of: Vec<u32>,
    #[serde(skip)]
    pub members: Vec<Vec<u32>>,
    pub centralizer_orders: Vec<u64>,
    pub element_orders: Vec<u64>,
    pub inverse_class: Vec<u32>,
    pub exponent: u64,
    /// `power_maps[m][c]` is the class of `g^m` for `g` in class `c`,
    /// for `0 <= m < exponent`.
    #[serde(skip)]
    pub power_maps: Vec<Vec<u32>>,
}

impl ClassData {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Class of `g^m` for `g` in class `c`; any `m >= 0`.
    pub fn power_map(&self, m: u64, c: usize) -> usize {
        self.power_maps[(m % self.exponent) as usize][c] as usize
    }

    pub fn class_of(&self, g: u32) -> usize {
        self.class_of[g as usize] as usize
    }
}

/// Partitions `G` into conjugation orbits, closing each orbit under
/// conjugation by the generators.
pub fn conj_classes(g: &GroupTable) -> ClassData {
    let n = g.order();
    let gens: Vec<u32> = g.generators().to_vec();
    let gen_invs: Vec<u32> = gens.iter().map(|&s| g.inv_idx(s)).collect();
    let mut class_of = vec![u32::MAX; n];
    let mut representatives = Vec::new();
    let mut members: Vec<Vec<u32>> = Vec::new();
    for start in 0..n as u32 {
        if class_of[start as usize] != u32::MAX {
            continue;
        }
        let c = representatives.len() as u32;
        representatives.push(start);
        class_of[start as usize] = c;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for (&s, &si) in gens.iter().zip(&gen_invs) {
                let y = g.mul_idx(g.mul_idx(si, x), s);
                if class_of[y as usize] == u32::MAX {
                    class_of[y as usize] = c;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        members.push(orbit);
    }

    let k = representatives.len();
    let order = n as u64;
    let sizes: Vec<u64> = members.iter().map(|m| m.len() as u64).collect();
    let centralizer_orders = sizes.iter().map(|&s| order / s).collect();
    let element_orders: Vec<u64> = representatives
        .iter()
        .map(|&r| g.element_order(r))
        .collect();
    let exponent = element_orders.iter().fold(1, |a, &b| lcm(a, b));
    let inverse_class = representatives
        .iter()
        .map(|&r| class_of[g.inv_idx(r) as usize])
        .collect();

    let mut power_maps = vec![vec![0u32; k]; exponent as usize];
    for (c, &r) in representatives.iter().enumerate() {
        let mut x = 0u32;
        for row in power_maps.iter_mut() {
            row[c] = class_of[x as usize];
            x = g.mul_idx(x, r);
        }
    }

    ClassData {
        order,
        representatives,
        sizes,
        class_of,
        members,
        centralizer_orders,
        element_orders,
        inverse_class,
        exponent,
        power_maps,
    }
}

/// Number of conjugacy classes of `A_n`, counted from cycle types: even
/// permutations with distinct odd parts split into two classes.
pub fn alternating_class_count(n: usize) -> usize {
    fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            partitions(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut all);
    all.iter()
        .filter(|parts| parts.iter().filter(|&&p| p % 2 == 0).count() % 2 == 0)
        .map(|parts| {
            let odd_distinct =
                parts.iter().all(|&p| p % 2 == 1) && parts.windows(2).all(|w| w[0] != w[1]);
            if odd_distinct && n > 1 {
                2
            } else {
                1
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::spec::GroupSpec;
    use crate::groups::table::group_build;
    use crate::rng::stream;
    use rand::Rng;

    fn build(spec: GroupSpec) -> (GroupTable, ClassData) {
        let g = group_build(&spec).unwrap();
        let c = conj_classes(&g);
        (g, c)
    }

    #[test]
    fn a5_classes() {
        let (_, c) = build(GroupSpec::alt(5).unwrap());
        assert_eq!(c.count(), 5);
        let mut sizes = c.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
        assert_eq!(c.exponent, 30);
    }

    #[test]
    fn psl2_7_has_six_classes() {
        let (_, c) = build(GroupSpec::psl2(7).unwrap());
        assert_eq!(c.count(), 6);
    }

    #[test]
    fn alternating_counts_match_partitions() {
        for n in 3..=9 {
            let (_, c) = build(GroupSpec::alt(n).unwrap());
            assert_eq!(c.count(), alternating_class_count(n), "A_{n}");
        }
    }

    #[test]
    fn structural_invariants() {
        for spec in [
            GroupSpec::sym(3).unwrap(),
            GroupSpec::sym(4).unwrap(),
            GroupSpec::alt(6).unwrap(),
            GroupSpec::psl2(8).unwrap(),
            GroupSpec::psl2(13).unwrap(),
            GroupSpec::sl2(5).unwrap(),
        ] {
            let (g, c) = build(spec);
            let n = g.order() as u64;
            assert_eq!(c.sizes.iter().sum::<u64>(), n);
            assert_eq!(c.sizes[0], 1);
            assert_eq!(c.representatives[0], 0);
            for (i, &s) in c.sizes.iter().enumerate() {
                assert_eq!(n % s, 0);
                assert_eq!(s * c.centralizer_orders[i], n);
                assert_eq!(c.inverse_class[c.inverse_class[i] as usize] as usize, i);
                assert_eq!(c.power_map(1, i), i);
                assert_eq!(c.power_map(0, i), 0);
                assert_eq!(c.members[i].len() as u64, s);
            }
        }
    }

    #[test]
    fn conjugation_and_power_coherence() {
        let (g, c) = build(GroupSpec::psl2(11).unwrap());
        let mut rng = stream(11, 0);
        for _ in 0..1000 {
            let x = g.random_index(&mut rng);
            let h = g.random_index(&mut rng);
            assert_eq!(c.class_of(g.conj_idx(x, h)), c.class_of(x));
            let m = rng.random_range(1..=c.exponent);
            assert_eq!(c.class_of(g.pow_idx(x, m)), c.power_map(m, c.class_of(x)));
        }
    }
}
