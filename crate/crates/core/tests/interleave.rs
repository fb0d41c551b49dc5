use mixer_core::groups::{group_build, Family, GroupSpec, GroupTable};
use mixer_core::interleave::*;
use mixer_core::{rng, Execution};
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn s3() -> GroupTable {
    group_build(&GroupSpec::sym(3).unwrap()).unwrap()
}

fn counts(e: &InterleaveEstimate) -> &[u64] {
    match &e.mode {
        EstimateMode::Exact { counts, .. } => counts,
        _ => panic!("not exact"),
    }
}

/// Walks all of `G^t x G^t`; the definition of the fiber.
fn fiber_by_enumeration(g: &GroupTable, target: u32, t: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    let full = TupleSet::full(g.order() as u32, t).unwrap();
    let mut out = Vec::new();
    for i in 0..full.len() {
        for j in 0..full.len() {
            let (a, b) = (full.tuple(i), full.tuple(j));
            if interleave_idx(g, &a, &b) == target {
                out.push((a, b));
            }
        }
    }
    out
}

fn fiber_chi2(g: &GroupTable, target: u32, draws: usize, seed: u64) -> f64 {
    let n = g.order() as u64;
    let fiber = fiber_by_enumeration(g, target, 2);
    // a fiber point is fixed by (a1, a2, b1)
    let key = |a: &[u32], b: &[u32]| ((a[0] as u64 * n + a[1] as u64) * n) + b[0] as u64;
    let mut slot = std::collections::HashMap::new();
    for (i, (a, b)) in fiber.iter().enumerate() {
        slot.insert(key(a, b), i);
    }
    assert_eq!(slot.len(), fiber.len());
    let mut hits = vec![0u64; fiber.len()];
    let mut r = rng::stream(seed, 0);
    for _ in 0..draws {
        let (a, b) = fiber_sample(g, target, 2, &mut r);
        assert_eq!(interleave_idx(g, &a, &b), target);
        hits[slot[&key(&a, &b)]] += 1;
    }
    let e = draws as f64 / fiber.len() as f64;
    let chi2: f64 = hits.iter().map(|&h| (h as f64 - e).powi(2) / e).sum();
    1.0 - ChiSquared::new((fiber.len() - 1) as f64).unwrap().cdf(chi2)
}

#[test]
fn fiber_sampler_is_uniform_on_s3() {
    let g = s3();
    for target in [0, 3] {
        let p = fiber_chi2(&g, target, 1_000_000, 17 + target as u64);
        assert!(p > 1e-3, "target {target}: p = {p}");
    }
}

#[test]
fn s3_golden_distribution() {
    let g = s3();
    let a = TupleSet::seeded(6, 2, 0.5, 1).unwrap();
    let b = TupleSet::seeded(6, 2, 0.5, 2).unwrap();
    let e =
        exact_distribution(&g, &a, &b, DEFAULT_INTERLEAVE_BUDGET, Execution::default()).unwrap();
    assert_eq!(counts(&e), counts_pairs(&g, &a, &b, Execution::Sequential));
    assert_eq!(counts(&e), GOLDEN_S3);
    assert!((e.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-10);

    let mc = mc_distribution(&g, &a, &b, 200_000, 4, Execution::default()).unwrap();
    let se = mc.std_errors().unwrap();
    for k in 0..6 {
        let sigma = (e.probabilities[k] * (1.0 - e.probabilities[k]) / 200_000.0).sqrt();
        assert!((mc.probabilities[k] - e.probabilities[k]).abs() <= 4.0 * sigma.max(se[k]));
    }
}

/// Pair counts for the seeded density-1/2 sets on `S_3`, `t = 2`, recorded
/// from the exhaustive enumeration.
const GOLDEN_S3: [u64; 6] = [49, 59, 56, 52, 55, 53];

#[test]
fn mixture_identity() {
    let g = group_build(&GroupSpec::alt(5).unwrap()).unwrap();
    let a = TupleSet::seeded(60, 2, 0.3, 8).unwrap();
    let b = TupleSet::seeded(60, 2, 0.4, 9).unwrap();
    let whole = exact_distribution(&g, &a, &b, u128::MAX, Execution::default()).unwrap();
    let mut summed = vec![0u64; 60];
    for part in a.chunks(97) {
        let e = exact_distribution(&g, &part, &b, u128::MAX, Execution::default()).unwrap();
        for (s, c) in summed.iter_mut().zip(counts(&e)) {
            *s += c;
        }
    }
    assert_eq!(summed, counts(&whole));
}

#[test]
fn full_density_mc_near_uniform() {
    let g = s3();
    let f = TupleSet::full(6, 3).unwrap();
    let mc = mc_distribution(&g, &f, &f, 100_000, 1, Execution::default()).unwrap();
    let sigma = ((1.0 / 6.0) * (5.0 / 6.0) / 100_000f64).sqrt();
    assert!(mc.linf <= 4.0 * sigma);
    let again = mc_distribution(&g, &f, &f, 100_000, 1, Execution::default()).unwrap();
    assert_eq!(mc, again);
}

#[test]
fn a5_decay_in_t() {
    let g = group_build(&GroupSpec::alt(5).unwrap()).unwrap();
    let mut reports = Vec::new();
    for t in [2, 3] {
        let a = TupleSet::seeded(60, t, 0.5, 1).unwrap();
        let b = TupleSet::seeded(60, t, 0.5, 2).unwrap();
        let e = exact_distribution(&g, &a, &b, DEFAULT_INTERLEAVE_BUDGET, Execution::default())
            .unwrap();
        reports.push(deviation_report(&e, Family::Alternating { n: 5 }));
    }
    assert!(reports.iter().all(|r| r.positive()));
    assert!(reports[1].implied_exponent >= reports[0].implied_exponent);
    assert!(reports[1].linf <= reports[0].linf);
}

#[test]
fn tuple_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("mixer-tuples-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let half = |bit: u32| {
        let full = TupleSet::full(6, 2).unwrap();
        let v: Vec<Vec<u32>> = (0..full.len())
            .map(|i| full.tuple(i))
            .filter(|t| t[1] % 2 == bit)
            .collect();
        TupleSet::explicit(6, 2, &v).unwrap()
    };
    let full = TupleSet::full(6, 2).unwrap();
    half(0).write(&dir.join("even.txt"), "S:3").unwrap();
    half(1).write(&dir.join("odd.txt"), "S:3").unwrap();
    full.write(&dir.join("all.txt"), "S:3").unwrap();
    std::fs::write(dir.join("p.txt"), "1,even.txt,all.txt\n0,odd.txt,all.txt\n").unwrap();
    let (p, group) = RectangleProtocol::read(&dir.join("p.txt"), 6).unwrap();
    assert_eq!(group, "S:3");
    assert_eq!(p.rectangles().len(), 2);
    assert_eq!(p.bit_budget(), 1);
    assert!(p.is_complete());
    let g = s3();
    let ex = exact_advantage(&p, &g, 0, 1, u128::MAX, Execution::default()).unwrap();
    assert!(ex.holds);
    std::fs::remove_dir_all(&dir).ok();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prefix_route_matches_pairs(t in 2usize..4, alpha in 0.05f64..1.0, beta in 0.05f64..1.0, seed in any::<u64>()) {
        let g = s3();
        let a = TupleSet::seeded(6, t, alpha, seed).unwrap();
        let b = TupleSet::seeded(6, t, beta, seed ^ 1).unwrap();
        let pairs = counts_pairs(&g, &a, &b, Execution::Sequential);
        prop_assert_eq!(counts_prefix(&g, &a, &b, Execution::Parallel), pairs.clone());
        let total: u64 = pairs.iter().sum();
        prop_assert_eq!(total as usize, a.len() * b.len());
    }

    #[test]
    fn fiber_points_hit_target(t in 1usize..6, target in 0u32..6, seed in any::<u64>()) {
        let g = s3();
        let mut r = rng::stream(seed, 0);
        let (a, b) = fiber_sample(&g, target, t, &mut r);
        prop_assert_eq!(a.len(), t);
        prop_assert_eq!(interleave_idx(&g, &a, &b), target);
    }
}
