//! Sets of `t`-tuples of group elements, stored as sorted mixed-radix codes.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum TupleMode {
    Explicit,
    SeededRandom { alpha: f64, seed: u64 },
}

/// A subset of `G^t`. Tuple `(a_1, ..., a_t)` has code
/// `a_1 n^(t-1) + ... + a_t` with `n = |G|`, so sorted codes are in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct TupleSet {
    arity: usize,
    order: u32,
    codes: Vec<u64>,
    mode: TupleMode,
}

fn space_size(order: u32, arity: usize) -> Result<u64> {
    if arity < 2 {
        return Err(Error::InvalidTupleSet(format!(
            "arity must be at least 2, got {arity}"
        )));
    }
    if order == 0 {
        return Err(Error::InvalidTupleSet("empty group".into()));
    }
    (order as u64)
        .checked_pow(arity as u32)
        .filter(|&s| s <= usize::MAX as u64)
        .ok_or_else(|| {
            Error::InvalidTupleSet(format!("|G|^t overflows for |G| = {order}, t = {arity}"))
        })
}

impl TupleSet {
    pub fn explicit(order: u32, arity: usize, tuples: &[Vec<u32>]) -> Result<Self> {
        space_size(order, arity)?;
        let mut codes = Vec::with_capacity(tuples.len());
        for tup in tuples {
            if tup.len() != arity {
                return Err(Error::ArityMismatch(arity, tup.len()));
            }
            if let Some(&bad) = tup.iter().find(|&&x| x >= order) {
                return Err(Error::InvalidTupleSet(format!(
                    "element index {bad} out of range for order {order}"
                )));
            }
            codes.push(encode(order, tup));
        }
        codes.sort_unstable();
        if codes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTupleSet("duplicate tuple".into()));
        }
        Self::from_sorted(order, arity, codes, TupleMode::Explicit)
    }

    pub fn full(order: u32, arity: usize) -> Result<Self> {
        let size = space_size(order, arity)?;
        Self::from_sorted(order, arity, (0..size).collect(), TupleMode::Explicit)
    }

    /// Exactly `round(alpha |G|^t)` tuples (at least one), chosen uniformly
    /// without replacement.
    pub fn seeded(order: u32, arity: usize, alpha: f64, seed: u64) -> Result<Self> {
        let size = space_size(order, arity)?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidTupleSet(format!(
                "density {alpha} not in (0, 1]"
            )));
        }
        let m = ((alpha * size as f64).round() as u64).clamp(1, size);
        let codes = if m == size {
            (0..size).collect()
        } else {
            let task = ((order as u64) << 8) | arity as u64;
            let mut r = rng::stream(seed, task);
            let mut codes: Vec<u64> = rand::seq::index::sample(&mut r, size as usize, m as usize)
                .into_iter()
                .map(|i| i as u64)
                .collect();
            codes.sort_unstable();
            codes
        };
        Self::from_sorted(order, arity, codes, TupleMode::SeededRandom { alpha, seed })
    }

    fn from_sorted(order: u32, arity: usize, codes: Vec<u64>, mode: TupleMode) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::InvalidTupleSet("empty tuple set".into()));
        }
        Ok(TupleSet {
            arity,
            order,
            codes,
            mode,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn mode(&self) -> &TupleMode {
        &self.mode
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    /// `|G|^t`.
    pub fn space(&self) -> u64 {
        (self.order as u64).pow(self.arity as u32)
    }

    /// `(|A|, |G|^t)`.
    pub fn density_ratio(&self) -> (u64, u64) {
        (self.codes.len() as u64, self.space())
    }

    pub fn density(&self) -> f64 {
        self.codes.len() as f64 / self.space() as f64
    }

    pub fn tuple(&self, i: usize) -> Vec<u32> {
        decode(self.order, self.arity, self.codes[i])
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        tuple.len() == self.arity
            && tuple.iter().all(|&x| x < self.order)
            && self.contains_code(encode(self.order, tuple))
    }

    pub fn contains_code(&self, code: u64) -> bool {
        self.codes.binary_search(&code).is_ok()
    }

    pub fn is_disjoint(&self, other: &TupleSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.codes.len() && j < other.codes.len() {
            match self.codes[i].cmp(&other.codes[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Splits into consecutive blocks of at most `size` tuples.
    pub fn chunks(&self, size: usize) -> Vec<TupleSet> {
        self.codes
            .chunks(size.max(1))
            .map(|c| TupleSet {
                arity: self.arity,
                order: self.order,
                codes: c.to_vec(),
                mode: TupleMode::Explicit,
            })
            .collect()
    }

    /// Header `t=<t> group=<spec>`, then one comma-separated tuple per line.
    pub fn to_text(&self, group: &str) -> String {
        let mut s = format!("t={} group={}\n", self.arity, group);
        for i in 0..self.codes.len() {
            let tup = self.tuple(i);
            for (j, x) in tup.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{x}");
            }
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path, group: &str) -> Result<()> {
        std::fs::write(path, self.to_text(group)).map_err(|e| Error::io(path, e))
    }

    /// Parses the file format; returns the set and the group named in the
    /// header.
    pub fn parse(text: &str, order: u32, path: &Path) -> Result<(TupleSet, String)> {
        let perr = |line: usize, msg: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| perr(1, "missing header".into()))?;
        let mut arity = None;
        let mut group = None;
        for field in header.split_whitespace() {
            if let Some(v) = field.strip_prefix("t=") {
                arity = v.parse::<usize>().ok();
            } else if let Some(v) = field.strip_prefix("group=") {
                group = Some(v.to_string());
            }
        }
        let arity = arity.ok_or_else(|| perr(hl + 1, "header needs t=<t>".into()))?;
        let group = group.ok_or_else(|| perr(hl + 1, "header needs group=<spec>".into()))?;
        let mut tuples = Vec::new();
        for (ln, line) in lines {
            let tup: std::result::Result<Vec<u32>, _> =
                line.split(',').map(|x| x.trim().parse::<u32>()).collect();
            let tup = tup.map_err(|e| perr(ln + 1, e.to_string()))?;
            tuples.push(tup);
        }
        Ok((TupleSet::explicit(order, arity, &tuples)?, group))
    }

    pub fn read(path: &Path, order: u32) -> Result<(TupleSet, String)> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, order, path)
    }
}

pub fn encode(order: u32, tuple: &[u32]) -> u64 {
    tuple
        .iter()
        .fold(0u64, |acc, &x| acc * order as u64 + x as u64)
}

pub fn decode(order: u32, arity: usize, mut code: u64) -> Vec<u32> {
    let n = order as u64;
    let mut out = vec![0u32; arity];
    for slot in out.iter_mut().rev() {
        *slot = (code % n) as u32;
        code /= n;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        let t = vec![3, 0, 5, 59];
        assert_eq!(decode(60, 4, encode(60, &t)), t);
        assert_eq!(encode(6, &[1, 2]), 8);
    }

    #[test]
    fn seeded_is_reproducible() {
        let a = TupleSet::seeded(6, 2, 0.5, 7).unwrap();
        let b = TupleSet::seeded(6, 2, 0.5, 7).unwrap();
        let c = TupleSet::seeded(6, 2, 0.5, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.codes(), c.codes());
        assert_eq!(a.len(), 18);
        assert_eq!(a.density_ratio(), (18, 36));
        assert!(a.codes().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(TupleSet::seeded(6, 2, 1.0, 1).unwrap().len(), 36);
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(TupleSet::explicit(6, 2, &[vec![1, 2], vec![1, 2]]).is_err());
        assert!(TupleSet::explicit(6, 2, &[]).is_err());
        assert!(TupleSet::explicit(6, 2, &[vec![6, 0]]).is_err());
        assert!(matches!(
            TupleSet::explicit(6, 2, &[vec![1, 2, 3]]),
            Err(Error::ArityMismatch(..))
        ));
        assert!(TupleSet::seeded(6, 2, 0.0, 1).is_err());
        assert!(TupleSet::seeded(6, 2, 1.5, 1).is_err());
        assert!(TupleSet::full(6, 1).is_err());
    }

    #[test]
    fn text_round_trip() {
        let a = TupleSet::seeded(6, 3, 0.25, 3).unwrap();
        let text = a.to_text("S:3");
        assert!(text.starts_with("t=3 group=S:3\n"));
        let (b, g) = TupleSet::parse(&text, 6, Path::new("x")).unwrap();
        assert_eq!(g, "S:3");
        assert_eq!(a.codes(), b.codes());
        assert!(TupleSet::parse("t=2 group=S:3\n1,x\n", 6, Path::new("x")).is_err());
    }

    #[test]
    fn disjointness() {
        let a = TupleSet::explicit(6, 2, &[vec![0, 1], vec![2, 3]]).unwrap();
        let b = TupleSet::explicit(6, 2, &[vec![0, 2], vec![2, 4]]).unwrap();
        let c = TupleSet::explicit(6, 2, &[vec![2, 3]]).unwrap();
        assert!(a.is_disjoint(&b));
        assert!(!a.is_disjoint(&c));
        assert!(a.contains(&[2, 3]));
        assert!(!a.contains(&[2, 4]));
    }
}
