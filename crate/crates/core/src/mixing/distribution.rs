//! The class-product distribution `p_{x,y}` and its norms.

use serde::Serialize;

use crate::characters::{CharacterTable, StructureConstants};
use crate::error::{Error, Result};
use crate::exec::{add_counts, Execution};
use crate::groups::{ClassData, GroupTable};

/// Default budget for brute-force double loops.
pub const DEFAULT_LOOP_BUDGET: u128 = 1_000_000_000;

/// Values below this count as zero on the numeric coverage path.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

/// `g -> p_{x,y}(g)`, stored per conjugacy class of `g`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairDistribution {
    pub x_class: usize,
    pub y_class: usize,
    /// Probability of each single element of class `k`.
    pub values: Vec<f64>,
    pub class_sizes: Vec<u64>,
    pub order: u64,
    /// Pair counts `#{(u, v) in C_x x C_y : uv in C_k}` on the exact path.
    pub exact_counts: Option<Vec<u64>>,
    /// Number of negative float-lift values clamped to zero.
    pub clamped: usize,
    /// Most negative raw value seen before clamping.
    pub min_raw: f64,
}

impl PairDistribution {
    pub fn is_exact(&self) -> bool {
        self.exact_counts.is_some()
    }

    /// `sum_k |C_k| p_k`.
    pub fn total(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.class_sizes)
            .map(|(p, &s)| s as f64 * p)
            .sum()
    }
}

fn check_class(c: &ClassData, i: usize) -> Result<()> {
    if i >= c.count() {
        return Err(Error::InvalidClass(i));
    }
    Ok(())
}

/// Frobenius formula:
/// `p_{x,y}(g) = |G|^-1 sum_chi chi(x) chi(y) chi(g^-1) / chi(1)`.
pub fn p_char(xc: usize, yc: usize, t: &CharacterTable, c: &ClassData) -> Result<PairDistribution> {
    check_class(c, xc)?;
    check_class(c, yc)?;
    let k = c.count();
    let n = c.order as f64;
    let mut clamped = 0;
    let mut min_raw: f64 = 0.0;
    let values = (0..k)
        .map(|g| {
            let ginv = c.inverse_class[g] as usize;
            let s: f64 = (0..t.values.len())
                .map(|chi| {
                    let row = &t.values[chi];
                    (row[xc] * row[yc] * row[ginv] / t.degrees[chi] as f64).re
                })
                .sum();
            let p = s / n;
            if p < 0.0 {
                clamped += 1;
                min_raw = min_raw.min(p);
                0.0
            } else {
                p
            }
        })
        .collect();
    Ok(PairDistribution {
        x_class: xc,
        y_class: yc,
        values,
        class_sizes: c.sizes.clone(),
        order: c.order,
        exact_counts: None,
        clamped,
        min_raw,
    })
}

/// Exhaustive double loop over `C_x x C_y`, counting products per class.
pub fn p_brute(
    xc: usize,
    yc: usize,
    g: &GroupTable,
    c: &ClassData,
    budget: u128,
) -> Result<PairDistribution> {
    p_brute_with(xc, yc, g, c, budget, Execution::default())
}

pub fn p_brute_with(
    xc: usize,
    yc: usize,
    g: &GroupTable,
    c: &ClassData,
    budget: u128,
    exec: Execution,
) -> Result<PairDistribution> {
    check_class(c, xc)?;
    check_class(c, yc)?;
    let needed = c.sizes[xc] as u128 * c.sizes[yc] as u128;
    if needed > budget {
        return Err(Error::LoopBudgetExceeded { needed, budget });
    }
    let k = c.count();
    let xs = &c.members[xc];
    let ys = &c.members[yc];
    let counts = exec.fold(
        xs.len(),
        || vec![0u64; k],
        |acc, i| {
            let u = xs[i];
            for &v in ys {
                acc[c.class_of(g.mul_idx(u, v))] += 1;
            }
        },
        add_counts,
    );
    let pairs = needed as f64;
    let values = counts
        .iter()
        .zip(&c.sizes)
        .map(|(&n, &s)| n as f64 / pairs / s as f64)
        .collect();
    Ok(PairDistribution {
        x_class: xc,
        y_class: yc,
        values,
        class_sizes: c.sizes.clone(),
        order: c.order,
        exact_counts: Some(counts),
        clamped: 0,
        min_raw: 0.0,
    })
}

/// `sum_k |C_k| p_k^2`.
pub fn l2_sq(p: &PairDistribution) -> f64 {
    p.values
        .iter()
        .zip(&p.class_sizes)
        .map(|(v, &s)| s as f64 * v * v)
        .sum()
}

/// `|G|^-1 sum_chi |chi(x)|^2 |chi(y)|^2 / chi(1)^2`.
pub fn l2_sq_char(xc: usize, yc: usize, t: &CharacterTable) -> f64 {
    let s: f64 = t
        .values
        .iter()
        .zip(&t.degrees)
        .map(|(row, &d)| row[xc].norm_sqr() * row[yc].norm_sqr() / (d * d) as f64)
        .sum();
    s / t.order as f64
}

/// Normalized collision statistic `N = |G| ||p_{x,y}||^2`.
pub fn normalized_norm(xc: usize, yc: usize, t: &CharacterTable) -> f64 {
    t.order as f64 * l2_sq_char(xc, yc, t)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Distances {
    pub l1: f64,
    /// `||p - U||^2` from `||p||^2 - 1/|G|`.
    pub l2_sq: f64,
    /// `||p - U||^2` summed directly.
    pub l2_sq_direct: f64,
    pub linf: f64,
}

pub fn dist_to_uniform(p: &PairDistribution) -> Distances {
    let u = 1.0 / p.order as f64;
    let mut l1 = 0.0;
    let mut direct = 0.0;
    let mut linf: f64 = 0.0;
    for (v, &s) in p.values.iter().zip(&p.class_sizes) {
        let d = v - u;
        l1 += s as f64 * d.abs();
        direct += s as f64 * d * d;
        linf = linf.max(d.abs());
    }
    Distances {
        l1,
        l2_sq: l2_sq(p) - u,
        l2_sq_direct: direct,
        linf,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Coverage {
    /// `|x^G y^G|` in elements.
    pub support: u64,
    pub fraction: f64,
    /// Set when the support came from thresholded floats.
    pub numeric: bool,
}

/// Support of `p_{x,y}`: exact counts when present, else values above
/// [`SUPPORT_THRESHOLD`].
pub fn coverage(p: &PairDistribution) -> Coverage {
    let (support, numeric) = match &p.exact_counts {
        Some(counts) => (
            counts
                .iter()
                .zip(&p.class_sizes)
                .filter(|(&n, _)| n > 0)
                .map(|(_, &s)| s)
                .sum(),
            false,
        ),
        None => (
            p.values
                .iter()
                .zip(&p.class_sizes)
                .filter(|(&v, _)| v > SUPPORT_THRESHOLD)
                .map(|(_, &s)| s)
                .sum(),
            true,
        ),
    };
    Coverage {
        support,
        fraction: support as f64 / p.order as f64,
        numeric,
    }
}

/// `|x^G y^G|` from the structure constants: `g_k in x^G y^G` iff
/// `a[x][y][k] > 0`.
pub fn coverage_exact(xc: usize, yc: usize, c: &ClassData, s: &StructureConstants) -> u64 {
    (0..c.count())
        .filter(|&k| s.get(xc, yc, k) > 0)
        .map(|k| c.sizes[k])
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThompsonResult {
    pub best_class: usize,
    pub coverage: u64,
    pub fraction: f64,
    pub witness: bool,
    /// `|(x^G)^2|` for every class.
    pub per_class: Vec<u64>,
}

/// Finds the class `x` maximizing `|(x^G)^2|`; a witness covers all of `G`.
pub fn thompson_search(c: &ClassData, s: &StructureConstants) -> ThompsonResult {
    let per_class: Vec<u64> = (0..c.count()).map(|x| coverage_exact(x, x, c, s)).collect();
    let (best_class, &cov) = per_class
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("at least one class");
    ThompsonResult {
        best_class,
        coverage: cov,
        fraction: cov as f64 / c.order as f64,
        witness: cov == c.order,
        per_class,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;
    use crate::GroupData;

    fn a5() -> GroupData {
        GroupData::build(&GroupSpec::alt(5).unwrap()).unwrap()
    }

    #[test]
    fn identity_class_gives_uniform_on_other_class() {
        let d = a5();
        for y in 0..d.classes.count() {
            let m = d.classes.sizes[y] as f64;
            for p in [
                p_char(0, y, &d.table, &d.classes).unwrap(),
                p_brute(0, y, &d.group, &d.classes, DEFAULT_LOOP_BUDGET).unwrap(),
            ] {
                for (k, &v) in p.values.iter().enumerate() {
                    let expect = if k == y { 1.0 / m } else { 0.0 };
                    assert!((v - expect).abs() < 1e-12, "y={y} k={k} v={v}");
                }
                assert!((l2_sq(&p) - 1.0 / m).abs() < 1e-12);
                let dist = dist_to_uniform(&p);
                assert!((dist.l1 - 2.0 * (1.0 - m / 60.0)).abs() < 1e-12);
                assert_eq!(coverage(&p).support, m as u64);
            }
        }
        let p = p_char(0, 0, &d.table, &d.classes).unwrap();
        assert!((p.values[0] - 1.0).abs() < 1e-12);
        assert!((l2_sq(&p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn s3_transposition_products() {
        let d = GroupData::build(&GroupSpec::sym(3).unwrap()).unwrap();
        let c = &d.classes;
        let t = (0..3).find(|&i| c.sizes[i] == 3).unwrap();
        let r = (0..3).find(|&i| c.sizes[i] == 2).unwrap();
        let p = p_brute(t, t, &d.group, c, DEFAULT_LOOP_BUDGET).unwrap();
        // 3 of 9 pairs give e, 6 give a 3-cycle (2 elements)
        assert_eq!(p.exact_counts.as_ref().unwrap()[0], 3);
        assert_eq!(p.exact_counts.as_ref().unwrap()[r], 6);
        assert!((p.values[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((p.values[r] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.values[t], 0.0);
    }

    #[test]
    fn uniform_input_has_zero_distance() {
        let p = PairDistribution {
            x_class: 0,
            y_class: 0,
            values: vec![0.25; 2],
            class_sizes: vec![1, 3],
            order: 4,
            exact_counts: None,
            clamped: 0,
            min_raw: 0.0,
        };
        let d = dist_to_uniform(&p);
        assert_eq!((d.l1, d.l2_sq, d.linf), (0.0, 0.0, 0.0));
    }

    #[test]
    fn budget_is_enforced() {
        let d = a5();
        let err = p_brute(3, 4, &d.group, &d.classes, 10).unwrap_err();
        assert!(matches!(err, Error::LoopBudgetExceeded { .. }));
        assert!(matches!(
            p_char(9, 0, &d.table, &d.classes),
            Err(Error::InvalidClass(9))
        ));
    }

    #[test]
    fn a5_thompson_witnesses() {
        let d = a5();
        let r = thompson_search(&d.classes, &d.constants);
        assert!(r.witness);
        for x in 0..5 {
            let p = p_brute(x, x, &d.group, &d.classes, DEFAULT_LOOP_BUDGET).unwrap();
            assert_eq!(coverage(&p).support, r.per_class[x]);
            let expect = match (d.classes.element_orders[x], d.classes.sizes[x]) {
                (1, _) => 1,
                (2, _) | (3, _) => 60,
                // two 5-cycles from one class never multiply to an involution
                (5, _) => 45,
                _ => unreachable!(),
            };
            assert_eq!(r.per_class[x], expect);
        }
    }
}
