//! Interleaved products `a_1 b_1 ... a_t b_t` over `G^t`: exact and sampled
//! distributions for subset pairs, deviation statistics, fiber sampling and
//! rectangle protocols.

pub mod distribution;
pub mod protocol;
pub mod tuples;

pub use distribution::{
    counts_pairs, counts_prefix, deviation_report, exact_distribution, exact_route, interleave_idx,
    interleave_product, mc_distribution, DeviationReport, EstimateMode, ExactRoute,
    InterleaveEstimate, DEFAULT_INTERLEAVE_BUDGET, MIN_MC_SAMPLES,
};
pub use protocol::{
    advantage, exact_advantage, fiber_sample, AdvantageEstimate, ExactAdvantage, Rectangle,
    RectangleProtocol, RectangleStat,
};
pub use tuples::{TupleMode, TupleSet};
