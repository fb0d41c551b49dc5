//! Fully enumerated groups.

use std::collections::{HashMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use rand::Rng;

use super::element::{Bytes, Element, Engine};
use super::field::GaloisField;
use super::spec::{GroupKind, GroupSpec};
use crate::error::{Error, Result};

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

/// Groups up to this order get a dense multiplication table on first use.
pub const DENSE_TABLE_MAX: usize = 2048;

/// A finite group with every element listed.
///
/// Index 0 is the identity; the remaining elements are sorted by their
/// canonical bytes.
pub struct GroupTable {
    id: u64,
    spec: GroupSpec,
    engine: Engine,
    elements: Vec<Bytes>,
    index: HashMap<Bytes, u32>,
    generators: Vec<u32>,
    inverses: Vec<u32>,
    degenerate: bool,
    dense: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("spec", &self.spec.label)
            .field("order", &self.order())
            .finish()
    }
}

/// Enumerates the group described by `spec` by breadth-first closure.
pub fn group_build(spec: &GroupSpec) -> Result<GroupTable> {
    spec.validate()?;
    let (engine, gens) = engine_and_generators(spec)?;
    let cap = spec.max_order;
    let identity = engine.identity();

    let mut seen: HashMap<Bytes, ()> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.clone(), ());
    queue.push_back(identity.clone());
    while let Some(x) = queue.pop_front() {
        for s in &gens {
            let y = engine.mul(&x, s);
            if !seen.contains_key(&y) {
                if seen.len() as u64 >= cap {
                    return Err(Error::CapExceeded {
                        order: seen.len() as u64 + 1,
                        cap,
                    });
                }
                seen.insert(y.clone(), ());
                queue.push_back(y);
            }
        }
    }

    let mut rest: Vec<Bytes> = seen.into_keys().filter(|b| *b != identity).collect();
    rest.sort_unstable();
    let mut elements = Vec::with_capacity(rest.len() + 1);
    elements.push(identity);
    elements.extend(rest);
    let index: HashMap<Bytes, u32> = elements
        .iter()
        .enumerate()
        .map(|(i, b)| (b.clone(), i as u32))
        .collect();
    let inverses = elements.iter().map(|b| index[&engine.inv(b)]).collect();
    let mut generators: Vec<u32> = gens.iter().map(|g| index[g]).collect();
    generators.retain(|&g| g != 0);
    generators.dedup();
    let degenerate = elements.len() == 1;

    Ok(GroupTable {
        id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
        spec: spec.clone(),
        engine,
        elements,
        index,
        generators,
        inverses,
        degenerate,
        dense: OnceLock::new(),
    })
}

fn engine_and_generators(spec: &GroupSpec) -> Result<(Engine, Vec<Bytes>)> {
    let perm = |degree: usize, cycles: &[&[usize]]| -> Bytes {
        let mut img: Vec<u8> = (0..degree as u8).collect();
        for c in cycles {
            for (i, &from) in c.iter().enumerate() {
                img[from] = c[(i + 1) % c.len()] as u8;
            }
        }
        Bytes::from_vec(img)
    };
    Ok(match &spec.kind {
        GroupKind::Sym(n) => {
            let n = *n;
            let long: Vec<usize> = (0..n).collect();
            let engine = Engine::Perm { degree: n };
            (engine, vec![perm(n, &[&[0, 1]]), perm(n, &[&long])])
        }
        GroupKind::Alt(n) => {
            let n = *n;
            let engine = Engine::Perm { degree: n };
            let gens = (2..n).map(|i| perm(n, &[&[0, 1, i]])).collect();
            (engine, gens)
        }
        GroupKind::SL2(q) | GroupKind::PSL2(q) => {
            let field = Arc::new(GaloisField::from_order(*q)?);
            let projective = matches!(spec.kind, GroupKind::PSL2(_));
            let xi = field.primitive();
            let xi_inv = field.inv(xi).expect("primitive element is nonzero");
            let engine = Engine::Mat2 {
                field: field.clone(),
                projective,
            };
            let gens = [
                [1, 1, 0, 1],
                [1, 0, 1, 1],
                [1, xi, 0, 1],
                [xi, 0, 0, xi_inv],
            ]
            .into_iter()
            .map(|m| engine.canonical_matrix(m))
            .collect();
            (engine, gens)
        }
        GroupKind::GeneratedPerm { degree, generators } => {
            let engine = Engine::Perm { degree: *degree };
            let gens = generators
                .iter()
                .map(|g| {
                    let mut img: Vec<u8> = g.clone();
                    img.extend(g.len() as u8..*degree as u8);
                    Bytes::from_vec(img)
                })
                .collect();
            (engine, gens)
        }
        GroupKind::GeneratedMat2 { generators, field } => {
            let field = Arc::new(GaloisField::new(field.clone())?);
            let engine = Engine::Mat2 {
                field,
                projective: false,
            };
            let gens = generators
                .iter()
                .map(|&m| engine.canonical_matrix(m))
                .collect();
            (engine, gens)
        }
    })
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn label(&self) -> &str {
        &self.spec.label
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    /// Set when the generators produced the trivial group.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn bytes(&self, i: u32) -> &[u8] {
        &self.elements[i as usize]
    }

    pub fn element(&self, i: u32) -> Element {
        Element {
            group: self.id,
            bytes: self.elements[i as usize].clone(),
        }
    }

    pub fn index_of_bytes(&self, bytes: &[u8]) -> Option<u32> {
        self.index.get(bytes).copied()
    }

    pub fn index_of(&self, e: &Element) -> Result<u32> {
        if e.group != self.id {
            return Err(Error::MixedGroups);
        }
        self.index_of_bytes(&e.bytes)
            .ok_or_else(|| Error::NotInGroup(e.hex()))
    }

    /// Wraps raw bytes, canonicalizing and checking membership.
    pub fn element_from_bytes(&self, raw: &[u8]) -> Result<Element> {
        let canon = self.engine.canonical(raw);
        match self.index.get(&canon) {
            Some(&i) => Ok(self.element(i)),
            None => Err(Error::NotInGroup(
                canon.iter().map(|b| format!("{b:02x}")).collect(),
            )),
        }
    }

    /// Reads an element index from text: a decimal index, `hex:<bytes>`,
    /// 1-based cycle notation such as `(1 2 3)`, or a matrix
    /// `[a,b;c,d]` with entries given as field codes.
    pub fn parse_element(&self, text: &str) -> Result<u32> {
        let text = text.trim();
        let bad = || Error::InvalidArgument(format!("cannot read element `{text}`"));
        if let Ok(i) = text.parse::<u32>() {
            return if (i as usize) < self.order() {
                Ok(i)
            } else {
                Err(Error::NotInGroup(text.to_string()))
            };
        }
        let raw: Vec<u8> = if let Some(h) = text.strip_prefix("hex:") {
            if h.len() % 2 != 0 {
                return Err(bad());
            }
            (0..h.len() / 2)
                .map(|i| u8::from_str_radix(&h[2 * i..2 * i + 2], 16).map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else if text.starts_with('(') {
            let Engine::Perm { degree } = self.engine else {
                return Err(bad());
            };
            let cycles = super::spec::parse_cycles(text).map_err(Error::InvalidArgument)?;
            if cycles.iter().flatten().any(|&p| p >= degree) {
                return Err(Error::NotInGroup(text.to_string()));
            }
            super::spec::perm_from_cycles(&cycles, degree)
        } else if let Some(body) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let Engine::Mat2 { field, .. } = &self.engine else {
                return Err(bad());
            };
            let v: Vec<u32> = body
                .split([',', ';'])
                .map(|x| x.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            if v.len() != 4 || v.iter().any(|&x| x >= field.size()) {
                return Err(bad());
            }
            self.engine
                .encode_matrix(field, [v[0], v[1], v[2], v[3]])
                .to_vec()
        } else {
            return Err(bad());
        };
        if let Engine::Perm { degree } = self.engine {
            if raw.len() != degree {
                return Err(Error::NotInGroup(text.to_string()));
            }
        }
        let e = self.element_from_bytes(&raw)?;
        self.index_of(&e)
    }

    pub fn render(&self, i: u32) -> String {
        self.engine.render(self.bytes(i))
    }

    pub fn mul(&self, g: &Element, h: &Element) -> Result<Element> {
        if g.group != self.id || h.group != self.id {
            return Err(Error::MixedGroups);
        }
        Ok(Element {
            group: self.id,
            bytes: self.engine.mul(&g.bytes, &h.bytes),
        })
    }

    pub fn inv(&self, g: &Element) -> Result<Element> {
        if g.group != self.id {
            return Err(Error::MixedGroups);
        }
        Ok(Element {
            group: self.id,
            bytes: self.engine.inv(&g.bytes),
        })
    }

    /// Product by index. Uses the dense table for small groups.
    #[inline]
    pub fn mul_idx(&self, i: u32, j: u32) -> u32 {
        let n = self.order();
        if n <= DENSE_TABLE_MAX {
            let t = self.dense.get_or_init(|| self.build_dense());
            return t[i as usize * n + j as usize];
        }
        let prod = self
            .engine
            .mul(&self.elements[i as usize], &self.elements[j as usize]);
        self.index[&prod]
    }

    /// Product by index without the dense table.
    pub fn mul_idx_direct(&self, i: u32, j: u32) -> u32 {
        let prod = self
            .engine
            .mul(&self.elements[i as usize], &self.elements[j as usize]);
        self.index[&prod]
    }

    #[inline]
    pub fn inv_idx(&self, i: u32) -> u32 {
        self.inverses[i as usize]
    }

    /// `h g h^-1`.
    pub fn conj_idx(&self, g: u32, h: u32) -> u32 {
        self.mul_idx(self.mul_idx(h, g), self.inv_idx(h))
    }

    pub fn pow_idx(&self, g: u32, m: u64) -> u32 {
        let mut acc = 0;
        let mut base = g;
        let mut m = m;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            m >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: u32) -> u64 {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul_idx(x, g);
            k += 1;
        }
        k
    }

    fn build_dense(&self) -> Vec<u32> {
        let n = self.order();
        let mut t = vec![0u32; n * n];
        for (i, row) in t.chunks_mut(n).enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.mul_idx_direct(i as u32, j as u32);
            }
        }
        t
    }

    /// Uniform random element index.
    pub fn random_index<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(0..self.order() as u32)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        self.element(self.random_index(rng))
    }

    /// Checks closure and the multiplication table: exhaustive for
    /// `|G| <= 10_000`, otherwise on `samples` random pairs.
    pub fn check_consistency<R: Rng + ?Sized>(&self, rng: &mut R, samples: usize) -> bool {
        let n = self.order() as u32;
        let check = |i: u32, j: u32| {
            let prod = self.engine.mul(self.bytes(i), self.bytes(j));
            self.index.contains_key(&prod)
        };
        if n <= 10_000 {
            for i in 0..n {
                if self.mul_idx(i, self.inv_idx(i)) != 0 {
                    return false;
                }
                for j in 0..n {
                    if !check(i, j) {
                        return false;
                    }
                }
            }
            true
        } else {
            (0..samples).all(|_| {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                check(i, j) && self.mul_idx(i, self.inv_idx(i)) == 0
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::spec::GroupSpec;
    use crate::rng::stream;

    #[test]
    fn named_orders() {
        let cases = [
            (GroupSpec::alt(5).unwrap(), 60),
            (GroupSpec::sym(3).unwrap(), 6),
            (GroupSpec::sym(4).unwrap(), 24),
            (GroupSpec::psl2(7).unwrap(), 168),
            (GroupSpec::sl2(5).unwrap(), 120),
            (GroupSpec::psl2(8).unwrap(), 504),
            (GroupSpec::psl2(9).unwrap(), 360),
            (GroupSpec::sl2(4).unwrap(), 60),
        ];
        for (spec, order) in cases {
            let g = group_build(&spec).unwrap();
            assert_eq!(g.order(), order, "{}", spec);
            assert_eq!(g.identity(), 0);
            assert_eq!(g.bytes(0), g.engine().identity().as_slice());
        }
    }

    #[test]
    fn identity_and_inverse_laws() {
        let g = group_build(&GroupSpec::alt(5).unwrap()).unwrap();
        let e = g.element(0);
        for i in 0..60 {
            let x = g.element(i);
            assert_eq!(g.mul(&e, &x).unwrap(), x);
            let xi = g.inv(&x).unwrap();
            assert_eq!(g.mul(&x, &xi).unwrap(), e);
        }
        let five = g.element_from_bytes(&[1, 2, 3, 4, 0]).unwrap();
        let inv = g.inv(&five).unwrap();
        assert_eq!(g.render(g.index_of(&inv).unwrap()), "(1 5 4 3 2)");
    }

    #[test]
    fn psl2_inverse_is_canonical_identity() {
        let g = group_build(&GroupSpec::psl2(7).unwrap()).unwrap();
        for i in 0..g.order() as u32 {
            let m = g.element(i);
            let prod = g.mul(&m, &g.inv(&m).unwrap()).unwrap();
            assert_eq!(g.index_of(&prod).unwrap(), 0);
        }
    }

    #[test]
    fn mixed_groups_rejected() {
        let a = group_build(&GroupSpec::alt(5).unwrap()).unwrap();
        let b = group_build(&GroupSpec::alt(5).unwrap()).unwrap();
        let x = a.element(3);
        let y = b.element(3);
        assert!(matches!(a.mul(&x, &y), Err(Error::MixedGroups)));
        assert!(matches!(b.inv(&x), Err(Error::MixedGroups)));
    }

    #[test]
    fn degenerate_generators() {
        let spec = GroupSpec::new(GroupKind::GeneratedPerm {
            degree: 3,
            generators: vec![vec![0, 1, 2]],
        })
        .unwrap();
        let g = group_build(&spec).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.is_degenerate());
        let mut rng = stream(1, 0);
        assert_eq!(g.random_index(&mut rng), 0);
    }

    #[test]
    fn cap_exceeded_during_closure() {
        let spec = GroupSpec::new(GroupKind::GeneratedPerm {
            degree: 5,
            generators: vec![vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]],
        })
        .unwrap()
        .with_max_order(100);
        assert!(matches!(group_build(&spec), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn tables_are_consistent() {
        let mut rng = stream(7, 0);
        for spec in [GroupSpec::alt(6).unwrap(), GroupSpec::psl2(11).unwrap()] {
            let g = group_build(&spec).unwrap();
            assert!(g.check_consistency(&mut rng, 1000));
        }
    }

    #[test]
    fn equal_seeds_equal_draws() {
        let g = group_build(&GroupSpec::alt(5).unwrap()).unwrap();
        let mut a = stream(42, 3);
        let mut b = stream(42, 3);
        let xs: Vec<u32> = (0..100).map(|_| g.random_index(&mut a)).collect();
        let ys: Vec<u32> = (0..100).map(|_| g.random_index(&mut b)).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn element_text_forms() {
        let g = group_build(&GroupSpec::alt(5).unwrap()).unwrap();
        let c = g.parse_element("(1 2 3)").unwrap();
        assert_eq!(g.render(c), "(1 2 3)");
        assert_eq!(g.parse_element(&c.to_string()).unwrap(), c);
        assert_eq!(
            g.parse_element(&format!("hex:{}", g.element(c).hex()))
                .unwrap(),
            c
        );
        assert!(g.parse_element("(1 2)").is_err());
        assert!(g.parse_element("60").is_err());
        assert!(g.parse_element("[1,0;0,1]").is_err());
        let m = group_build(&GroupSpec::psl2(7).unwrap()).unwrap();
        let x = m.parse_element("[1,1;0,1]").unwrap();
        assert_eq!(m.parse_element("[6,6;0,6]").unwrap(), x);
        assert_eq!(m.parse_element("[1,0;0,1]").unwrap(), 0);
    }
}
