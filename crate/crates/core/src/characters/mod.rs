//! Structure constants, Dixon-Schneider character tables and zeta values.

pub mod dixon;
pub mod modp;
pub mod structure;
pub mod table;

use serde::Serialize;

pub use dixon::{dixon_char_table, dixon_prime};
pub use structure::{structure_constants, structure_constants_with, StructureConstants};
pub use table::{verify_orthogonality, witten_zeta, CharacterTable, OrthogonalityReport};

use crate::error::Result;
use crate::groups::{Family, GroupSpec};
use crate::GroupData;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ZetaTrendRow {
    pub group: String,
    pub zeta: f64,
    pub excess: f64,
    pub normalizer: f64,
    pub normalized_excess: f64,
}

/// `(zeta_G(s) - 1) * n^s` for `A_n`, `(zeta_G(s) - 1) * q^(r s)` for the
/// rank-`r` Lie type groups, unnormalized otherwise.
pub fn zeta_trend(family: &[GroupSpec], s: f64) -> Result<Vec<ZetaTrendRow>> {
    family
        .iter()
        .map(|spec| {
            let data = GroupData::build(spec)?;
            Ok(zeta_row(spec, &data.table, s))
        })
        .collect()
}

pub fn zeta_row(spec: &GroupSpec, t: &CharacterTable, s: f64) -> ZetaTrendRow {
    let zeta = witten_zeta(t, s);
    let normalizer = match spec.family() {
        Family::Alternating { n } => (n as f64).powf(s),
        Family::LieType { q, rank } => (q as f64).powf(rank as f64 * s),
        Family::Other => 1.0,
    };
    ZetaTrendRow {
        group: spec.label.clone(),
        zeta,
        excess: zeta - 1.0,
        normalizer,
        normalized_excess: (zeta - 1.0) * normalizer,
    }
}
