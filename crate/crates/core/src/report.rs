use serde::{Deserialize, Serialize};

use crate::{CVector, C64};

/// Outcome of a property check.
///
/// Serialises as
/// `{"property": "...", "pass": bool, "worst_residual": x, "witness": {...}?, "seed": n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub property: String,
    pub pass: bool,
    pub worst_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub seed: u64,
}

impl CheckReport {
    /// Non-finite residuals are stored as `f64::MAX` so the report stays valid JSON.
    pub fn new(property: &str, pass: bool, worst_residual: f64, seed: u64) -> Self {
        CheckReport {
            property: property.to_string(),
            pass,
            worst_residual: if worst_residual.is_finite() { worst_residual } else { f64::MAX },
            witness: None,
            seed,
        }
    }

    pub fn with_witness(mut self, witness: serde_json::Value) -> Self {
        self.witness = Some(witness);
        self
    }
}

/// Coefficients as `[re, im]` pairs, the format used in every JSON surface.
pub fn coeff_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn from_pairs(pairs: &[[f64; 2]]) -> CVector {
    CVector::from_iterator(pairs.len(), pairs.iter().map(|p| C64::new(p[0], p[1])))
}
