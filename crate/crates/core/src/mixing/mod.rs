//! Class-product distributions, distances to uniform, coverage and surveys.

pub mod distribution;
pub mod survey;

pub use distribution::{
    coverage, coverage_exact, dist_to_uniform, l2_sq, l2_sq_char, normalized_norm, p_brute,
    p_brute_with, p_char, thompson_search, Coverage, Distances, PairDistribution, ThompsonResult,
    DEFAULT_LOOP_BUDGET,
};
pub use survey::{
    char_bound_fraction, survey, threshold_probability, CharBound, Coupling, PairRecord,
    SurveyOptions, SurveyReport, ThresholdRow,
};
