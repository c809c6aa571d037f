//! The algebra interchange format.
//!
//! ```json
//! {"dim": 2, "unital": true, "unit": [[1,0],[1,0]],
//!  "mul": [[0,0,0,1,0],[1,1,1,1,0]], "star": [[0,0,1,0],[1,1,1,0]],
//!  "labels": ["p", "q"]}
//! ```
//!
//! `mul` entries are `[i, j, k, re, im]` meaning `e_i e_j` has coefficient
//! `re + i·im` on `e_k`; `star` entries are `[i, k, re, im]` meaning `e_i*`
//! has that coefficient on `e_k`. Indices are 0-based and zero entries are
//! omitted.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::StarAlgebra;
use crate::{CMatrix, CVector, Error, Result, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unital: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<[f64; 2]>>,
    pub mul: Vec<(usize, usize, usize, f64, f64)>,
    pub star: Vec<(usize, usize, f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn check_index(what: &str, idx: usize, dim: usize) -> Result<()> {
    if idx >= dim {
        return Err(Error::Malformed(format!("{what} index {idx} out of range for dimension {dim}")));
    }
    Ok(())
}

impl AlgebraFile {
    pub fn into_algebra(self) -> Result<StarAlgebra> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        let mut left = vec![CMatrix::zeros(n, n); n];
        let mut seen = BTreeSet::new();
        for &(i, j, k, re, im) in &self.mul {
            check_index("mul", i, n)?;
            check_index("mul", j, n)?;
            check_index("mul", k, n)?;
            if !seen.insert((i, j, k)) {
                return Err(Error::Malformed(format!("duplicate mul entry ({i}, {j}, {k})")));
            }
            left[i][(k, j)] = C64::new(re, im);
        }
        let mut star = CMatrix::zeros(n, n);
        let mut seen = BTreeSet::new();
        for &(i, k, re, im) in &self.star {
            check_index("star", i, n)?;
            check_index("star", k, n)?;
            if !seen.insert((i, k)) {
                return Err(Error::Malformed(format!("duplicate star entry ({i}, {k})")));
            }
            star[(k, i)] = C64::new(re, im);
        }
        let mut alg = StarAlgebra::new(left, star)?;
        if let Some(u) = self.unit {
            let v = CVector::from_iterator(u.len(), u.iter().map(|p| C64::new(p[0], p[1])));
            alg = alg.with_declared_unit(v)?;
        }
        if let Some(flag) = self.unital {
            alg = alg.with_declared_unital(flag);
        }
        if let Some(labels) = self.labels {
            alg = alg.with_labels(labels)?;
        }
        Ok(alg)
    }

    pub fn from_algebra(alg: &StarAlgebra) -> Self {
        let n = alg.dim();
        let mut mul = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = alg.structure_constant(i, j, k);
                    if c.re != 0.0 || c.im != 0.0 {
                        mul.push((i, j, k, c.re, c.im));
                    }
                }
            }
        }
        let s = alg.star_matrix();
        let mut star = Vec::new();
        for i in 0..n {
            for k in 0..n {
                let c = s[(k, i)];
                if c.re != 0.0 || c.im != 0.0 {
                    star.push((i, k, c.re, c.im));
                }
            }
        }
        AlgebraFile {
            dim: n,
            unital: Some(alg.is_unital()),
            unit: alg.unit().map(|u| u.iter().map(|z| [z.re, z.im]).collect()),
            mul,
            star,
            labels: alg.labels().map(|l| l.to_vec()),
        }
    }
}

impl StarAlgebra {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgebraFile = serde_json::from_str(text)?;
        file.into_algebra()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&AlgebraFile::from_algebra(self)).expect("algebra file serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn parses_two_dimensional_diagonal_algebra() {
        let text = r#"{"dim": 2, "mul": [[0,0,0,1,0],[1,1,1,1,0]], "star": [[0,0,1,0],[1,1,1,0]]}"#;
        let a = StarAlgebra::from_json(text).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.is_unital());
        assert!(a.validate(1e-12).passed);
    }

    #[test]
    fn round_trips_through_json() {
        let m2 = instances::matrix_algebra(2);
        let back = StarAlgebra::from_json(&m2.to_json()).unwrap();
        assert_eq!(back.to_json(), m2.to_json());
    }

    #[test]
    fn out_of_range_index_is_malformed() {
        let text = r#"{"dim": 1, "mul": [[0,0,1,1,0]], "star": [[0,0,1,0]]}"#;
        assert!(matches!(StarAlgebra::from_json(text), Err(Error::Malformed(_))));
    }

    #[test]
    fn duplicate_entry_is_malformed() {
        let text = r#"{"dim": 1, "mul": [[0,0,0,1,0],[0,0,0,1,0]], "star": [[0,0,1,0]]}"#;
        assert!(matches!(StarAlgebra::from_json(text), Err(Error::Malformed(_))));
    }

    #[test]
    fn bad_json_is_reported() {
        assert!(matches!(StarAlgebra::from_json("{"), Err(Error::Json(_))));
    }
}
