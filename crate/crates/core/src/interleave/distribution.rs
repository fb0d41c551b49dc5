//! Exact and sampled distributions of the interleaved product `a . b` for
//! `a` uniform in `A` and `b` uniform in `B`.

use rand::Rng;
use serde::{Serialize, Serializer};

use super::tuples::TupleSet;
use crate::error::{Error, Result};
use crate::exec::{add_counts, Execution};
use crate::groups::{Element, Family, GroupTable};
use crate::rng;

/// Default limit on elementary steps for [`exact_distribution`].
pub const DEFAULT_INTERLEAVE_BUDGET: u128 = 10_000_000_000;

pub const MIN_MC_SAMPLES: u64 = 10_000;
const MC_BLOCK: u64 = 4096;

/// Largest `|G|^t` for which the prefix recursion is used; it holds two
/// `u32` arrays of this length.
const TRIE_MAX_SPACE: u64 = 1 << 26;

/// `a_1 b_1 a_2 b_2 ... a_t b_t`.
pub fn interleave_product(g: &GroupTable, a: &[Element], b: &[Element]) -> Result<Element> {
    if a.len() != b.len() {
        return Err(Error::ArityMismatch(a.len(), b.len()));
    }
    let mut acc = g.element(g.identity());
    for (x, y) in a.iter().zip(b) {
        acc = g.mul(&acc, x)?;
        acc = g.mul(&acc, y)?;
    }
    Ok(acc)
}

/// Index form of [`interleave_product`]; `a` and `b` must have equal length.
pub fn interleave_idx(g: &GroupTable, a: &[u32], b: &[u32]) -> u32 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(g.identity(), |acc, (&x, &y)| {
        g.mul_idx(g.mul_idx(acc, x), y)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EstimateMode {
    /// `counts[g]` pairs out of `total = |A| |B|`.
    Exact {
        counts: Vec<u64>,
        total: u128,
    },
    MonteCarlo {
        samples: u64,
        std_errors: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterleaveEstimate {
    pub group: String,
    pub arity: usize,
    pub order: usize,
    pub size_a: usize,
    pub size_b: usize,
    pub alpha: f64,
    pub beta: f64,
    pub probabilities: Vec<f64>,
    pub mode: EstimateMode,
    /// `max_g |P(a . b = g) - 1/|G||`.
    pub linf: f64,
}

impl InterleaveEstimate {
    pub fn is_exact(&self) -> bool {
        matches!(self.mode, EstimateMode::Exact { .. })
    }

    pub fn std_errors(&self) -> Option<&[f64]> {
        match &self.mode {
            EstimateMode::MonteCarlo { std_errors, .. } => Some(std_errors),
            EstimateMode::Exact { .. } => None,
        }
    }

    /// Report with per-element values keyed by hex-encoded canonical bytes.
    pub fn to_json(&self, g: &GroupTable) -> serde_json::Value {
        let keyed = |v: &[f64]| -> serde_json::Map<String, serde_json::Value> {
            v.iter()
                .enumerate()
                .map(|(i, &p)| (g.element(i as u32).hex(), p.into()))
                .collect()
        };
        let mut out = serde_json::json!({
            "schema_version": crate::characters::table::SCHEMA_VERSION,
            "group": self.group,
            "t": self.arity,
            "order": self.order,
            "size_a": self.size_a,
            "size_b": self.size_b,
            "alpha": self.alpha,
            "beta": self.beta,
            "linf": self.linf,
            "probabilities": keyed(&self.probabilities),
        });
        match &self.mode {
            EstimateMode::Exact { total, .. } => {
                out["mode"] = "exact".into();
                out["pairs"] = total.to_string().into();
            }
            EstimateMode::MonteCarlo {
                samples,
                std_errors,
            } => {
                out["mode"] = "montecarlo".into();
                out["samples"] = (*samples).into();
                out["std_errors"] = keyed(std_errors).into();
            }
        }
        out
    }
}

fn check_pair(g: &GroupTable, a: &TupleSet, b: &TupleSet) -> Result<()> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch(a.arity(), b.arity()));
    }
    for s in [a, b] {
        if s.order() as usize != g.order() {
            return Err(Error::InvalidTupleSet(format!(
                "tuple set over a group of order {}, expected {}",
                s.order(),
                g.order()
            )));
        }
    }
    Ok(())
}

/// Which exact route [`exact_distribution`] takes, with its step count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactRoute {
    /// Every pair in `A x B`; `|A| |B|` steps.
    Pairs(u128),
    /// Recursion over common prefixes of `A`; about `t |G|^(t+1)` steps.
    Prefix(u128),
}

impl ExactRoute {
    pub fn steps(self) -> u128 {
        match self {
            ExactRoute::Pairs(s) | ExactRoute::Prefix(s) => s,
        }
    }
}

pub fn exact_route(a: &TupleSet, b: &TupleSet) -> ExactRoute {
    let pairs = a.len() as u128 * b.len() as u128;
    let n = a.order() as u128;
    let space = a.space();
    if space <= TRIE_MAX_SPACE {
        let prefix = a.arity() as u128 * n.pow(a.arity() as u32 + 1);
        if prefix < pairs {
            return ExactRoute::Prefix(prefix);
        }
    }
    ExactRoute::Pairs(pairs)
}

/// Exact law of `a . b` over `A x B`.
pub fn exact_distribution(
    g: &GroupTable,
    a: &TupleSet,
    b: &TupleSet,
    budget: u128,
    exec: Execution,
) -> Result<InterleaveEstimate> {
    check_pair(g, a, b)?;
    let route = exact_route(a, b);
    if route.steps() > budget {
        return Err(Error::LoopBudgetExceeded {
            needed: route.steps(),
            budget,
        });
    }
    let counts = match route {
        ExactRoute::Pairs(_) => counts_pairs(g, a, b, exec),
        ExactRoute::Prefix(_) => counts_prefix(g, a, b, exec),
    };
    Ok(exact_estimate(g, a, b, counts))
}

pub(crate) fn exact_estimate(
    g: &GroupTable,
    a: &TupleSet,
    b: &TupleSet,
    counts: Vec<u64>,
) -> InterleaveEstimate {
    let n = g.order();
    let total = a.len() as u128 * b.len() as u128;
    let probabilities = counts.iter().map(|&c| c as f64 / total as f64).collect();
    // max |c n - total| / (total n), exact in integers until the final division
    let worst = counts
        .iter()
        .map(|&c| (c as u128 * n as u128).abs_diff(total))
        .max()
        .unwrap_or(0);
    let linf = worst as f64 / (total as f64 * n as f64);
    InterleaveEstimate {
        group: g.label().to_string(),
        arity: a.arity(),
        order: n,
        size_a: a.len(),
        size_b: b.len(),
        alpha: a.density(),
        beta: b.density(),
        probabilities,
        mode: EstimateMode::Exact { counts, total },
        linf,
    }
}

/// Enumerates all pairs; the reference path.
pub fn counts_pairs(g: &GroupTable, a: &TupleSet, b: &TupleSet, exec: Execution) -> Vec<u64> {
    let n = g.order();
    let t = a.arity();
    let bs: Vec<Vec<u32>> = (0..b.len()).map(|j| b.tuple(j)).collect();
    exec.fold(
        a.len(),
        || vec![0u64; n],
        |acc, i| {
            let x = a.tuple(i);
            for y in &bs {
                let mut w = g.identity();
                for k in 0..t {
                    w = g.mul_idx(g.mul_idx(w, x[k]), y[k]);
                }
                acc[w as usize] += 1;
            }
        },
        add_counts,
    )
}

/// Counts through the prefix tree of `A`.
///
/// For a prefix `p` of length `j` and a suffix `s = (b_{j+1}, ..., b_{t-1})`
/// the level-`j` vector holds, for each `w`, the number of completions
/// `(a_{j+1}, ..., a_t)` of `p` in `A` with
/// `a_{j+1} b_{j+1} ... b_{t-1} a_t = w`. Level `t-1` is the indicator of
/// `A`; level `j` is a sum of left translates of level `j+1`. The root
/// vectors are then combined with the last coordinates of `B`.
pub fn counts_prefix(g: &GroupTable, a: &TupleSet, b: &TupleSet, exec: Execution) -> Vec<u64> {
    let n = g.order();
    let t = a.arity();
    let table: Vec<u32> = (0..n * n)
        .map(|i| g.mul_idx((i / n) as u32, (i % n) as u32))
        .collect();
    let pow = |e: usize| n.pow(e as u32);

    // present[j][p]: some tuple of A starts with the length-j prefix p
    let mut present: Vec<Vec<bool>> = (0..=t).map(|j| vec![false; pow(j)]).collect();
    for &c in a.codes() {
        for (j, row) in present.iter_mut().enumerate() {
            row[(c / pow(t - j) as u64) as usize] = true;
        }
    }

    let mut level = vec![0u32; pow(t)];
    for &c in a.codes() {
        level[c as usize] = 1;
    }
    let mut next = vec![0u32; pow(t)];
    for j in (0..t - 1).rev() {
        let s_out = pow(t - 1 - j);
        let s_in = pow(t - 2 - j);
        let src = &level;
        let present_child = &present[j + 1];
        exec.for_each_chunk(&mut next, n, |i, out| {
            out.iter_mut().for_each(|x| *x = 0);
            let (p, s) = (i / s_out, i % s_out);
            if !present[j][p] {
                return;
            }
            let (bj, rest) = (s / s_in, s % s_in);
            for c in 0..n {
                let child = p * n + c;
                if !present_child[child] {
                    continue;
                }
                let h = table[c * n + bj] as usize;
                let row = &table[h * n..(h + 1) * n];
                let base = (child * s_in + rest) * n;
                for (w, &v) in src[base..base + n].iter().enumerate() {
                    out[row[w] as usize] += v;
                }
            }
        });
        std::mem::swap(&mut level, &mut next);
    }

    // group B by its first t-1 coordinates
    let mut groups: Vec<(usize, Vec<u32>)> = Vec::new();
    for &c in b.codes() {
        let (s, last) = ((c / n as u64) as usize, (c % n as u64) as u32);
        match groups.last_mut() {
            Some((s0, v)) if *s0 == s => v.push(last),
            _ => groups.push((s, vec![last])),
        }
    }
    let level = &level;
    exec.fold(
        groups.len(),
        || vec![0u64; n],
        |acc, k| {
            let (s, lasts) = &groups[k];
            let root = &level[s * n..(s + 1) * n];
            for (w, &v) in root.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                let row = &table[w * n..(w + 1) * n];
                for &bt in lasts {
                    acc[row[bt as usize] as usize] += v as u64;
                }
            }
        },
        add_counts,
    )
}

/// Monte Carlo estimate from `samples` independent uniform draws of
/// `(a, b) in A x B`. Draws are split into fixed blocks with their own
/// streams, so the output depends only on `seed`.
pub fn mc_distribution(
    g: &GroupTable,
    a: &TupleSet,
    b: &TupleSet,
    samples: u64,
    seed: u64,
    exec: Execution,
) -> Result<InterleaveEstimate> {
    check_pair(g, a, b)?;
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_MC_SAMPLES} samples required, got {samples}"
        )));
    }
    let n = g.order();
    let t = a.arity();
    let blocks = samples.div_ceil(MC_BLOCK);
    let counts = exec.fold(
        blocks as usize,
        || vec![0u64; n],
        |acc, blk| {
            let mut r = rng::stream(seed, blk as u64);
            let len = MC_BLOCK.min(samples - blk as u64 * MC_BLOCK);
            let mut x = vec![0u32; t];
            let mut y = vec![0u32; t];
            for _ in 0..len {
                let ca = a.codes()[r.random_range(0..a.len())];
                let cb = b.codes()[r.random_range(0..b.len())];
                decode_into(ca, n as u64, &mut x);
                decode_into(cb, n as u64, &mut y);
                acc[interleave_idx(g, &x, &y) as usize] += 1;
            }
        },
        add_counts,
    );
    let m = samples as f64;
    let probabilities: Vec<f64> = counts.iter().map(|&c| c as f64 / m).collect();
    let std_errors = probabilities
        .iter()
        .map(|&p| (p * (1.0 - p) / m).sqrt())
        .collect();
    let u = 1.0 / n as f64;
    let linf = probabilities
        .iter()
        .map(|p| (p - u).abs())
        .fold(0.0, f64::max);
    Ok(InterleaveEstimate {
        group: g.label().to_string(),
        arity: t,
        order: n,
        size_a: a.len(),
        size_b: b.len(),
        alpha: a.density(),
        beta: b.density(),
        probabilities,
        mode: EstimateMode::MonteCarlo {
            samples,
            std_errors,
        },
        linf,
    })
}

fn decode_into(mut code: u64, n: u64, out: &mut [u32]) {
    for slot in out.iter_mut().rev() {
        *slot = (code % n) as u32;
        code /= n;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationReport {
    pub group: String,
    pub t: usize,
    pub linf: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `D alpha beta |G|`.
    pub normalized: f64,
    /// `x` in `normalized = x^(-c t)`: `n` for `A_n`, `q^r` for rank-`r`
    /// Lie type, `|G|` otherwise.
    pub scale: f64,
    /// `c` solving `normalized = scale^(-c t)`; `+inf` when `D = 0`.
    #[serde(serialize_with = "finite_or_inf")]
    pub implied_exponent: f64,
    /// One of the sets is a single tuple.
    pub degenerate_density: bool,
}

fn finite_or_inf<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str("inf")
    }
}

impl DeviationReport {
    pub fn positive(&self) -> bool {
        self.implied_exponent > 0.0
    }
}

pub fn deviation_report(e: &InterleaveEstimate, family: Family) -> DeviationReport {
    let normalized = e.linf * e.alpha * e.beta * e.order as f64;
    let scale = match family {
        Family::Alternating { n } => n as f64,
        Family::LieType { q, rank } => (q as f64).powi(rank as i32),
        Family::Other => e.order as f64,
    };
    let implied_exponent = if normalized == 0.0 {
        f64::INFINITY
    } else {
        -normalized.ln() / (e.arity as f64 * scale.ln())
    };
    DeviationReport {
        group: e.group.clone(),
        t: e.arity,
        linf: e.linf,
        alpha: e.alpha,
        beta: e.beta,
        normalized,
        scale,
        implied_exponent,
        degenerate_density: e.size_a == 1 || e.size_b == 1,
    }
}
