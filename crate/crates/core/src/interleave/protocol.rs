//! Fiber sampling and the rectangle distinguishing experiment.

use std::path::Path;

use rand::Rng;
use serde::Serialize;

use super::distribution::{exact_distribution, exact_route, EstimateMode};
use super::tuples::{encode, TupleSet};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::groups::GroupTable;
use crate::rng;

const ADVANTAGE_BLOCK: u64 = 4096;

/// Uniform draw from `{(a, b) in G^t x G^t : a . b = target}`: `a` and
/// `b_1, ..., b_{t-1}` are uniform and `b_t` is solved for.
pub fn fiber_sample<R: Rng + ?Sized>(
    g: &GroupTable,
    target: u32,
    t: usize,
    rng: &mut R,
) -> (Vec<u32>, Vec<u32>) {
    assert!(t >= 1, "arity must be positive");
    let a: Vec<u32> = (0..t).map(|_| g.random_index(rng)).collect();
    let mut b: Vec<u32> = (0..t - 1).map(|_| g.random_index(rng)).collect();
    let mut w = g.identity();
    for k in 0..t - 1 {
        w = g.mul_idx(g.mul_idx(w, a[k]), b[k]);
    }
    w = g.mul_idx(w, a[t - 1]);
    b.push(g.mul_idx(g.inv_idx(w), target));
    (a, b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rectangle {
    pub bit: bool,
    pub a: TupleSet,
    pub b: TupleSet,
}

/// A deterministic protocol given by its transcript rectangles.
#[derive(Clone, Debug, PartialEq)]
pub struct RectangleProtocol {
    arity: usize,
    order: u32,
    rectangles: Vec<Rectangle>,
}

impl RectangleProtocol {
    /// Checks common arity and order and that no two rectangles meet.
    pub fn new(rectangles: Vec<Rectangle>) -> Result<Self> {
        let first = rectangles
            .first()
            .ok_or_else(|| Error::InvalidProtocol("no rectangles".into()))?;
        let (arity, order) = (first.a.arity(), first.a.order());
        for r in &rectangles {
            for s in [&r.a, &r.b] {
                if s.arity() != arity {
                    return Err(Error::ArityMismatch(arity, s.arity()));
                }
                if s.order() != order {
                    return Err(Error::InvalidProtocol(
                        "rectangles over different groups".into(),
                    ));
                }
            }
        }
        for i in 0..rectangles.len() {
            for j in i + 1..rectangles.len() {
                let (x, y) = (&rectangles[i], &rectangles[j]);
                if !x.a.is_disjoint(&y.a) && !x.b.is_disjoint(&y.b) {
                    return Err(Error::InvalidProtocol(format!(
                        "rectangles {i} and {j} overlap"
                    )));
                }
            }
        }
        Ok(RectangleProtocol {
            arity,
            order,
            rectangles,
        })
    }

    /// One rectangle covering everything, answering `bit`.
    pub fn constant(order: u32, arity: usize, bit: bool) -> Result<Self> {
        let full = TupleSet::full(order, arity)?;
        Self::new(vec![Rectangle {
            bit,
            a: full.clone(),
            b: full,
        }])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rectangles(&self) -> &[Rectangle] {
        &self.rectangles
    }

    /// `ceil(log2 R)` for `R` rectangles.
    pub fn bit_budget(&self) -> u32 {
        let r = self.rectangles.len();
        usize::BITS - (r - 1).leading_zeros()
    }

    /// Rectangles are disjoint, so they cover everything exactly when their
    /// sizes add up to `|G|^(2t)`.
    pub fn is_complete(&self) -> bool {
        let covered: u128 = self
            .rectangles
            .iter()
            .map(|r| r.a.len() as u128 * r.b.len() as u128)
            .sum();
        covered == (self.order as u128).pow(2 * self.arity as u32)
    }

    pub fn evaluate(&self, a: &[u32], b: &[u32]) -> Option<bool> {
        let (ca, cb) = (encode(self.order, a), encode(self.order, b));
        self.rectangles
            .iter()
            .find(|r| r.a.contains_code(ca) && r.b.contains_code(cb))
            .map(|r| r.bit)
    }

    /// One rectangle per line, `bit,<Afile>,<Bfile>`; relative paths are
    /// taken from the protocol file's directory.
    pub fn read(path: &Path, order: u32) -> Result<(Self, String)> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let perr = |line: usize, msg: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let mut rects = Vec::new();
        let mut group: Option<String> = None;
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            let [bit, fa, fb] = parts[..] else {
                return Err(perr(ln + 1, "expected bit,<Afile>,<Bfile>".into()));
            };
            let bit = match bit {
                "0" => false,
                "1" => true,
                _ => return Err(perr(ln + 1, format!("bad bit {bit:?}"))),
            };
            let (a, ga) = TupleSet::read(&dir.join(fa), order)?;
            let (b, gb) = TupleSet::read(&dir.join(fb), order)?;
            for gx in [ga, gb] {
                match &group {
                    Some(g0) if *g0 != gx => {
                        return Err(Error::InvalidProtocol(format!(
                            "tuple files name groups {g0} and {gx}"
                        )))
                    }
                    _ => group = Some(gx),
                }
            }
            rects.push(Rectangle { bit, a, b });
        }
        let p = Self::new(rects)?;
        Ok((p, group.unwrap_or_default()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdvantageEstimate {
    pub p_g: f64,
    pub p_h: f64,
    pub advantage: f64,
    pub std_error: f64,
    pub bit_budget: u32,
    pub samples: u64,
}

fn check_protocol(p: &RectangleProtocol, g: &GroupTable) -> Result<()> {
    if p.order as usize != g.order() {
        return Err(Error::InvalidProtocol(format!(
            "protocol over a group of order {}, expected {}",
            p.order,
            g.order()
        )));
    }
    Ok(())
}

/// Fraction of `samples` fiber draws over `target` on which the protocol
/// answers 1.
fn accept_rate(
    p: &RectangleProtocol,
    g: &GroupTable,
    target: u32,
    samples: u64,
    seed: u64,
    lane: u64,
    exec: Execution,
) -> Result<f64> {
    let blocks = samples.div_ceil(ADVANTAGE_BLOCK) as usize;
    let per_block = exec.map(blocks, |blk| -> Result<u64> {
        let mut r = rng::stream(seed, 2 * blk as u64 + lane);
        let len = ADVANTAGE_BLOCK.min(samples - blk as u64 * ADVANTAGE_BLOCK);
        let mut ones = 0;
        for _ in 0..len {
            let (a, b) = fiber_sample(g, target, p.arity, &mut r);
            match p.evaluate(&a, &b) {
                Some(bit) => ones += bit as u64,
                None => return Err(Error::UncoveredProbe { a, b }),
            }
        }
        Ok(ones)
    });
    let mut ones = 0;
    for x in per_block {
        ones += x?;
    }
    Ok(ones as f64 / samples as f64)
}

/// Estimates `p_g` and `p_h`, the acceptance probabilities conditioned on
/// `a . b = g` and `a . b = h`.
pub fn advantage(
    p: &RectangleProtocol,
    g: &GroupTable,
    x: u32,
    y: u32,
    samples: u64,
    seed: u64,
    exec: Execution,
) -> Result<AdvantageEstimate> {
    check_protocol(p, g)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let p_g = accept_rate(p, g, x, samples, seed, 0, exec)?;
    let p_h = accept_rate(p, g, y, samples, seed, 1, exec)?;
    let m = samples as f64;
    let std_error = (p_g * (1.0 - p_g) / m + p_h * (1.0 - p_h) / m).sqrt();
    Ok(AdvantageEstimate {
        p_g,
        p_h,
        advantage: (p_g - p_h).abs(),
        std_error,
        bit_budget: p.bit_budget(),
        samples,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RectangleStat {
    pub bit: bool,
    pub alpha: f64,
    pub beta: f64,
    pub linf: f64,
    /// `D alpha beta |G|`.
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactAdvantage {
    pub p_g: f64,
    pub p_h: f64,
    pub advantage: f64,
    pub bit_budget: u32,
    pub rectangles: Vec<RectangleStat>,
    /// `2^c max_i D_i alpha_i beta_i |G|`.
    pub bound: f64,
    pub holds: bool,
}

/// Exact `p_g`, `p_h` from per-rectangle counts, with the bound
/// `|p_g - p_h| <= 2^c max_i D_i alpha_i beta_i |G|`.
///
/// Each fiber has `|G|^(2t-1)` points, so
/// `p_g - p_h = sum_{bit_i = 1} alpha_i beta_i |G| (P_i(g) - P_i(h))`, and
/// also minus the same sum over the 0-rectangles. Taking the smaller side,
/// at most `R/2` terms each of size at most `2 D_i alpha_i beta_i |G|`
/// remain.
pub fn exact_advantage(
    p: &RectangleProtocol,
    g: &GroupTable,
    x: u32,
    y: u32,
    budget: u128,
    exec: Execution,
) -> Result<ExactAdvantage> {
    check_protocol(p, g)?;
    if !p.is_complete() {
        return Err(Error::InvalidProtocol(
            "rectangles do not cover G^t x G^t".into(),
        ));
    }
    let needed: u128 = p
        .rectangles
        .iter()
        .map(|r| exact_route(&r.a, &r.b).steps())
        .sum();
    if needed > budget {
        return Err(Error::LoopBudgetExceeded { needed, budget });
    }
    let n = g.order() as u128;
    let fiber = n.pow(2 * p.arity as u32 - 1);
    let (mut ones_g, mut ones_h) = (0u128, 0u128);
    let mut rectangles = Vec::new();
    for r in &p.rectangles {
        let e = exact_distribution(g, &r.a, &r.b, budget, exec)?;
        let counts = match &e.mode {
            EstimateMode::Exact { counts, .. } => counts,
            _ => unreachable!(),
        };
        if r.bit {
            ones_g += counts[x as usize] as u128;
            ones_h += counts[y as usize] as u128;
        }
        rectangles.push(RectangleStat {
            bit: r.bit,
            alpha: e.alpha,
            beta: e.beta,
            linf: e.linf,
            normalized: e.linf * e.alpha * e.beta * e.order as f64,
        });
    }
    let p_g = ones_g as f64 / fiber as f64;
    let p_h = ones_h as f64 / fiber as f64;
    let advantage = ones_g.abs_diff(ones_h) as f64 / fiber as f64;
    let worst = rectangles.iter().map(|r| r.normalized).fold(0.0, f64::max);
    let bound = 2f64.powi(p.bit_budget() as i32) * worst;
    Ok(ExactAdvantage {
        p_g,
        p_h,
        advantage,
        bit_budget: p.bit_budget(),
        rectangles,
        bound,
        holds: advantage <= bound * (1.0 + 1e-12) + 1e-15,
    })
}
