//! Coupling-weighted surveys of the collision statistic and the
//! character-bound fraction.

use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use super::distribution::{coverage_exact, dist_to_uniform, normalized_norm, p_char};
use crate::characters::{witten_zeta, CharacterTable};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::groups::ClassData;
use crate::rng;
use crate::GroupData;

pub const NORMALIZATION_NOTE: &str =
    "N = |G| * ||p_{x,y}||_2^2; thresholds 1+delta bound N, so N = 1 is exactly uniform";

/// Element sweeps above this order fall back to seeded sampling.
pub const EXACT_SWEEP_LIMIT: usize = 100_000;
pub const FALLBACK_SAMPLES: usize = 100_000;

/// Slack on the float comparison `N <= 1 + delta`.
const THRESHOLD_SLACK: f64 = 1e-9;

pub const QUANTILE_LEVELS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

/// Joint law of `(x, y)` with uniform marginals.
#[derive(Clone, Debug, PartialEq)]
pub enum Coupling {
    Independent,
    /// `y = x`.
    Diagonal,
    /// `y = x^-1 a` for a fixed element index `a`.
    TranslatedInverse(u32),
    /// `y = sigma(x)` for a permutation `sigma` of element indices.
    Bijection(Vec<u32>),
}

impl Coupling {
    pub fn bijection(table: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; table.len()];
        for &v in &table {
            match seen.get_mut(v as usize) {
                Some(s) if !*s => *s = true,
                _ => {
                    return Err(Error::InvalidCoupling(
                        "bijection table is not a permutation".into(),
                    ))
                }
            }
        }
        Ok(Coupling::Bijection(table))
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Independent => f.write_str("independent"),
            Coupling::Diagonal => f.write_str("diagonal"),
            Coupling::TranslatedInverse(a) => write!(f, "transinv:{a}"),
            Coupling::Bijection(t) => write!(f, "bijection[{}]", t.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairRecord {
    pub x_class: usize,
    pub y_class: usize,
    pub x_element: Option<u32>,
    pub weight: f64,
    pub n_stat: f64,
    pub l1: f64,
    pub coverage: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdRow {
    #[serde(serialize_with = "finite_or_inf")]
    pub delta: f64,
    pub probability: f64,
}

fn finite_or_inf<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str("inf")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurveyReport {
    pub group: String,
    pub coupling: String,
    pub normalization: &'static str,
    pub records: Vec<PairRecord>,
    pub weight_sum: f64,
    pub mean_n: f64,
    pub quantiles: Vec<(f64, f64)>,
    pub thresholds: Vec<ThresholdRow>,
    pub sampling_fallback: bool,
}

#[derive(Clone, Debug)]
pub struct SurveyOptions {
    pub thresholds: Vec<f64>,
    pub seed: u64,
    pub exact_limit: usize,
    pub samples: usize,
    pub exec: Execution,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            thresholds: vec![0.01, 0.1, 0.5, 1.0, f64::INFINITY],
            seed: 0,
            exact_limit: EXACT_SWEEP_LIMIT,
            samples: FALLBACK_SAMPLES,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct PairStats {
    n_stat: f64,
    l1: f64,
    coverage: f64,
}

fn pair_stats(d: &GroupData, exec: Execution) -> Vec<PairStats> {
    let k = d.classes.count();
    let n = d.order() as f64;
    exec.map(k * k, |xy| {
        let (x, y) = (xy / k, xy % k);
        let p = p_char(x, y, &d.table, &d.classes).expect("valid classes");
        PairStats {
            n_stat: normalized_norm(x, y, &d.table),
            l1: dist_to_uniform(&p).l1,
            coverage: coverage_exact(x, y, &d.classes, &d.constants) as f64 / n,
        }
    })
}

pub fn survey(d: &GroupData, coupling: &Coupling, opts: &SurveyOptions) -> Result<SurveyReport> {
    let k = d.classes.count();
    let order = d.order();
    let n = order as f64;
    let c = &d.classes;
    let stats = pair_stats(d, opts.exec);
    let record = |x: usize, y: usize, elem: Option<u32>, weight: f64| {
        let s = stats[x * k + y];
        PairRecord {
            x_class: x,
            y_class: y,
            x_element: elem,
            weight,
            n_stat: s.n_stat,
            l1: s.l1,
            coverage: s.coverage,
        }
    };

    let mut sampling_fallback = false;
    let records: Vec<PairRecord> = match coupling {
        Coupling::Independent => (0..k * k)
            .map(|xy| {
                let (x, y) = (xy / k, xy % k);
                record(x, y, None, (c.sizes[x] * c.sizes[y]) as f64 / (n * n))
            })
            .collect(),
        Coupling::Diagonal => (0..k)
            .map(|x| record(x, x, None, c.sizes[x] as f64 / n))
            .collect(),
        Coupling::TranslatedInverse(_) | Coupling::Bijection(_) => {
            let partner = |x: u32| -> u32 {
                match coupling {
                    Coupling::TranslatedInverse(a) => d.group.mul_idx(d.group.inv_idx(x), *a),
                    Coupling::Bijection(t) => t[x as usize],
                    _ => unreachable!(),
                }
            };
            match coupling {
                Coupling::TranslatedInverse(a) if *a as usize >= order => {
                    return Err(Error::InvalidCoupling(format!("element {a} out of range")))
                }
                Coupling::Bijection(t) if t.len() != order => {
                    return Err(Error::InvalidCoupling(format!(
                        "bijection has {} entries, group has {order}",
                        t.len()
                    )))
                }
                _ => {}
            }
            if order <= opts.exact_limit {
                let w = 1.0 / n;
                opts.exec.map(order, |x| {
                    let x = x as u32;
                    record(c.class_of(x), c.class_of(partner(x)), Some(x), w)
                })
            } else {
                sampling_fallback = true;
                let w = 1.0 / opts.samples as f64;
                let seed = opts.seed;
                opts.exec.map(opts.samples, |i| {
                    let mut r = rng::stream(seed, i as u64);
                    let x = r.random_range(0..order as u32);
                    record(c.class_of(x), c.class_of(partner(x)), Some(x), w)
                })
            }
        }
    };

    let weight_sum: f64 = records.iter().map(|r| r.weight).sum();
    let mean_n = records.iter().map(|r| r.weight * r.n_stat).sum::<f64>() / weight_sum;
    let quantiles = weighted_quantiles(&records, &QUANTILE_LEVELS);
    let thresholds = opts
        .thresholds
        .iter()
        .map(|&delta| ThresholdRow {
            delta,
            probability: threshold_probability(&records, delta),
        })
        .collect();
    Ok(SurveyReport {
        group: d.group.label().to_string(),
        coupling: coupling.to_string(),
        normalization: NORMALIZATION_NOTE,
        records,
        weight_sum,
        mean_n,
        quantiles,
        thresholds,
        sampling_fallback,
    })
}

/// Weighted probability that `N <= 1 + delta`.
pub fn threshold_probability(records: &[PairRecord], delta: f64) -> f64 {
    records
        .iter()
        .filter(|r| r.n_stat <= 1.0 + delta + THRESHOLD_SLACK)
        .map(|r| r.weight)
        .sum::<f64>()
        + 0.0
}

fn weighted_quantiles(records: &[PairRecord], levels: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted: Vec<(f64, f64)> = records.iter().map(|r| (r.n_stat, r.weight)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = sorted.iter().map(|s| s.1).sum();
    levels
        .iter()
        .map(|&q| {
            let mut acc = 0.0;
            let v = sorted
                .iter()
                .find(|(_, w)| {
                    acc += w;
                    acc >= q * total - 1e-12
                })
                .or(sorted.last())
                .map_or(f64::NAN, |s| s.0);
            (q, v)
        })
        .collect()
}

impl SurveyReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("xclass,yclass,weight,N,l1,coverage\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.x_class, r.y_class, r.weight, r.n_stat, r.l1, r.coverage
            ));
        }
        out
    }

    /// Summary without the per-pair records.
    pub fn summary_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        let obj = v.as_object_mut().unwrap();
        obj.remove("records");
        obj.insert("record_count".into(), self.records.len().into());
        obj.insert(
            "schema_version".into(),
            crate::characters::table::SCHEMA_VERSION.into(),
        );
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CharBound {
    pub s: f64,
    /// Class-size weighted fraction of `x` with `|chi(x)| <= chi(1)^(s/2)`
    /// for every irreducible `chi`.
    pub fraction: f64,
    /// `2 - zeta_G(s)`.
    pub bound: f64,
    pub holds: bool,
}

/// Fraction of `x` with `|chi(x)| <= chi(1)^(s/2)` for all `chi`, against
/// the lower bound `2 - zeta_G(s)`. Returns an error when the bound is
/// below one and the fraction does not strictly exceed it.
pub fn char_bound_fraction(c: &ClassData, t: &CharacterTable, s: f64) -> Result<CharBound> {
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s = {s} must be positive")));
    }
    let n = c.order as f64;
    let fraction: f64 = (0..c.count())
        .filter(|&j| {
            t.values
                .iter()
                .zip(&t.degrees)
                .all(|(row, &d)| row[j].norm() <= (d as f64).powf(s / 2.0) + 1e-9)
        })
        .map(|j| c.sizes[j] as f64 / n)
        .sum();
    let bound = 2.0 - witten_zeta(t, s);
    let holds = bound >= 1.0 || fraction > bound;
    if !holds {
        return Err(Error::CharBoundViolated { fraction, bound });
    }
    Ok(CharBound {
        s,
        fraction,
        bound,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;

    #[test]
    fn bijection_must_permute() {
        assert!(Coupling::bijection(vec![0, 2, 1]).is_ok());
        assert!(Coupling::bijection(vec![0, 0, 1]).is_err());
        assert!(Coupling::bijection(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn independent_a5_covers_everything_at_infinity() {
        let d = GroupData::build(&GroupSpec::alt(5).unwrap()).unwrap();
        let r = survey(&d, &Coupling::Independent, &SurveyOptions::default()).unwrap();
        assert!((r.weight_sum - 1.0).abs() < 1e-10);
        let inf = r.thresholds.last().unwrap();
        assert!(inf.delta.is_infinite());
        assert!((inf.probability - 1.0).abs() < 1e-12);
        let direct: f64 = (0..5)
            .flat_map(|x| (0..5).map(move |y| (x, y)))
            .map(|(x, y)| {
                (d.classes.sizes[x] * d.classes.sizes[y]) as f64 / 3600.0
                    * normalized_norm(x, y, &d.table)
            })
            .sum();
        assert!((r.mean_n - direct).abs() < 1e-12);
    }

    #[test]
    fn large_s_gives_full_fraction() {
        let d = GroupData::build(&GroupSpec::alt(5).unwrap()).unwrap();
        let b = char_bound_fraction(&d.classes, &d.table, 2.0).unwrap();
        assert_eq!(b.fraction, 1.0);
        assert!(char_bound_fraction(&d.classes, &d.table, 0.0).is_err());
    }

    #[test]
    fn diagonal_weights_are_class_sizes() {
        let d = GroupData::build(&GroupSpec::psl2(7).unwrap()).unwrap();
        let r = survey(&d, &Coupling::Diagonal, &SurveyOptions::default()).unwrap();
        assert_eq!(r.records.len(), d.classes.count());
        assert!((r.weight_sum - 1.0).abs() < 1e-12);
    }
}
