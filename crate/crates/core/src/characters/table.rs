//! Complex character tables, orthogonality and the Witten zeta function.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::groups::ClassData;

pub const SCHEMA_VERSION: u32 = 1;

/// Orthogonality tolerance relative to `|G|`.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterTable {
    pub group: String,
    pub order: u64,
    pub class_sizes: Vec<u64>,
    /// `chi_i(1)`, exact.
    pub degrees: Vec<u64>,
    /// `values[i][j] = chi_i(g_j)`.
    pub values: Vec<Vec<Complex64>>,
    pub prime: u64,
    pub residuals: OrthogonalityReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub row: f64,
    pub column: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CharacterTable {
    pub(crate) fn new(
        group: String,
        order: u64,
        class_sizes: Vec<u64>,
        degrees: Vec<u64>,
        values: Vec<Vec<Complex64>>,
        prime: u64,
    ) -> Self {
        let residuals = orthogonality(order, &class_sizes, &values);
        CharacterTable {
            group,
            order,
            class_sizes,
            degrees,
            values,
            prime,
            residuals,
        }
    }

    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn value(&self, chi: usize, class: usize) -> Complex64 {
        self.values[chi][class]
    }

    pub fn degree_square_sum(&self) -> u64 {
        self.degrees.iter().map(|d| d * d).sum()
    }

    /// Copy with one value replaced, for fault-injection checks.
    pub fn with_value(&self, chi: usize, class: usize, v: Complex64) -> Self {
        let mut values = self.values.clone();
        values[chi][class] = v;
        CharacterTable::new(
            self.group.clone(),
            self.order,
            self.class_sizes.clone(),
            self.degrees.clone(),
            values,
            self.prime,
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TableJson::from(self)).expect("table serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> serde_json::Result<Self> {
        let t: TableJson = serde_json::from_value(v.clone())?;
        let values = t
            .values
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        Ok(CharacterTable::new(
            t.group,
            t.order,
            t.class_sizes,
            t.degrees,
            values,
            t.prime,
        ))
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    schema_version: u32,
    group: String,
    order: u64,
    class_sizes: Vec<u64>,
    degrees: Vec<u64>,
    values: Vec<Vec<[f64; 2]>>,
    residuals: OrthogonalityReport,
    prime: u64,
}

impl From<&CharacterTable> for TableJson {
    fn from(t: &CharacterTable) -> Self {
        TableJson {
            schema_version: SCHEMA_VERSION,
            group: t.group.clone(),
            order: t.order,
            class_sizes: t.class_sizes.clone(),
            degrees: t.degrees.clone(),
            values: t
                .values
                .iter()
                .map(|row| row.iter().map(|z| [clean(z.re), clean(z.im)]).collect())
                .collect(),
            residuals: t.residuals,
            prime: t.prime,
        }
    }
}

/// Rounds float-lift noise so the serialized table is reproducible.
fn clean(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn orthogonality(order: u64, sizes: &[u64], values: &[Vec<Complex64>]) -> OrthogonalityReport {
    let k = sizes.len();
    let n = order as f64;
    let mut row: f64 = 0.0;
    for i in 0..values.len() {
        for j in 0..values.len() {
            let s: Complex64 = (0..k)
                .map(|c| sizes[c] as f64 * values[i][c] * values[j][c].conj())
                .sum();
            let expect = if i == j { n } else { 0.0 };
            row = row.max((s - expect).norm());
        }
    }
    let mut column: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            let s: Complex64 = values.iter().map(|r| r[a] * r[b].conj()).sum();
            let expect = if a == b { n / sizes[a] as f64 } else { 0.0 };
            column = column.max((s - expect).norm());
        }
    }
    if values.len() != k {
        row = f64::INFINITY;
    }
    let tolerance = ORTHOGONALITY_TOL * n;
    OrthogonalityReport {
        row,
        column,
        tolerance,
        pass: row < tolerance && column < tolerance,
    }
}

/// Row and column orthogonality residuals against `10^-8 |G|`.
pub fn verify_orthogonality(t: &CharacterTable, c: &ClassData) -> OrthogonalityReport {
    orthogonality(c.order, &c.sizes, &t.values)
}

/// `sum_chi chi(1)^-s`.
pub fn witten_zeta(t: &CharacterTable, s: f64) -> f64 {
    t.degrees.iter().map(|&d| (d as f64).powf(-s)).sum()
}
