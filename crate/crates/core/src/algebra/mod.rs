//! Finite-dimensional complex *-algebras given by structure constants.
//!
//! A [`StarAlgebra`] of dimension `n` stores, for every basis element `e_i`,
//! the matrix of left multiplication `y ↦ e_i y`; the structure constants
//! are `c[i][j][k] = left[i][(k, j)]`. The involution is stored as the
//! complex matrix `S` with `(e_i)* = Σ_k S[k][i] e_k`, so that for a
//! coefficient vector `x` we get `x* = S · conj(x)`.

pub(crate) mod element;
pub mod json;
pub(crate) mod poly;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::linalg::{one, zero};
use crate::{CMatrix, CVector, Error, Result, C64, DEFAULT_TOL};

pub use element::Element;
pub use poly::{minimal_polynomial, spectrum, Polynomial, Spectrum};

#[derive(Clone)]
pub struct StarAlgebra {
    dim: usize,
    left: Vec<CMatrix>,
    star: CMatrix,
    unit: Option<CVector>,
    declared_unit: Option<CVector>,
    declared_unital: Option<bool>,
    unit_residual: f64,
    labels: Option<Vec<String>>,
    hull: OnceLock<Arc<StarAlgebra>>,
}

impl fmt::Debug for StarAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StarAlgebra")
            .field("dim", &self.dim)
            .field("unital", &self.unit.is_some())
            .field("labels", &self.labels)
            .finish()
    }
}

/// Defects of the *-algebra axioms measured on basis elements.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ValidationReport {
    pub dim: usize,
    pub associativity_defect: f64,
    pub involution_defect: f64,
    pub unit_defect: f64,
    pub unital: bool,
    pub tol: f64,
    pub passed: bool,
}

impl StarAlgebra {
    /// Build from left-multiplication matrices (`left[i]` is `y ↦ e_i y`) and
    /// the involution matrix. Unit detection runs with [`DEFAULT_TOL`].
    pub fn new(left: Vec<CMatrix>, star: CMatrix) -> Result<Self> {
        let dim = left.len();
        if dim == 0 {
            return Err(Error::Malformed("algebra dimension must be positive".into()));
        }
        for (i, l) in left.iter().enumerate() {
            if l.shape() != (dim, dim) {
                return Err(Error::Malformed(format!(
                    "left multiplication matrix {i} has shape {:?}, expected ({dim}, {dim})",
                    l.shape()
                )));
            }
        }
        if star.shape() != (dim, dim) {
            return Err(Error::Malformed(format!(
                "star matrix has shape {:?}, expected ({dim}, {dim})",
                star.shape()
            )));
        }
        let mut alg = StarAlgebra {
            dim,
            left,
            star,
            unit: None,
            declared_unit: None,
            declared_unital: None,
            unit_residual: 0.0,
            labels: None,
            hull: OnceLock::new(),
        };
        let (unit, residual) = alg.solve_unit();
        alg.unit_residual = residual;
        if residual <= DEFAULT_TOL {
            alg.unit = Some(unit);
        }
        Ok(alg)
    }

    /// Build from a product rule `e_i e_j = products(i, j)`.
    pub fn from_products<F>(dim: usize, mut products: F, star: CMatrix) -> Result<Self>
    where
        F: FnMut(usize, usize) -> CVector,
    {
        let mut left = vec![CMatrix::zeros(dim, dim); dim];
        for (i, l) in left.iter_mut().enumerate() {
            for j in 0..dim {
                let p = products(i, j);
                if p.len() != dim {
                    return Err(Error::Malformed(format!(
                        "product e_{i} e_{j} has length {}, expected {dim}",
                        p.len()
                    )));
                }
                l.set_column(j, &p);
            }
        }
        Self::new(left, star)
    }

    /// Record a unit vector supplied by the input. It is validated, never trusted.
    pub fn with_declared_unit(mut self, unit: CVector) -> Result<Self> {
        if unit.len() != self.dim {
            return Err(Error::Malformed(format!(
                "unit has length {}, expected {}",
                unit.len(),
                self.dim
            )));
        }
        self.declared_unit = Some(unit);
        Ok(self)
    }

    pub fn with_declared_unital(mut self, unital: bool) -> Self {
        self.declared_unital = Some(unital);
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::Malformed(format!(
                "{} labels for dimension {}",
                labels.len(),
                self.dim
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    pub fn unit(&self) -> Option<&CVector> {
        self.unit.as_ref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn star_matrix(&self) -> &CMatrix {
        &self.star
    }

    pub fn left_matrices(&self) -> &[CMatrix] {
        &self.left
    }

    /// `c[i][j][k]`, the coefficient of `e_k` in `e_i e_j`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> C64 {
        self.left[i][(k, j)]
    }

    pub fn basis_vector(&self, i: usize) -> CVector {
        let mut v = CVector::zeros(self.dim);
        v[i] = one();
        v
    }

    pub fn mul_vec(&self, x: &CVector, y: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim);
        for (i, l) in self.left.iter().enumerate() {
            if x[i] != zero() {
                out.gemv(x[i], l, y, one());
            }
        }
        out
    }

    pub fn star_vec(&self, x: &CVector) -> CVector {
        &self.star * x.map(|z| z.conj())
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mul_matrix(&self, x: &CVector) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (i, l) in self.left.iter().enumerate() {
            if x[i] != zero() {
                out.zip_apply(l, |o, v| *o += v * x[i]);
            }
        }
        out
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_mul_matrix(&self, x: &CVector) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (i, l) in self.left.iter().enumerate() {
            out.set_column(i, &(l * x));
        }
        out
    }

    /// `t_k = trace(L_{e_k})`; the regular trace is the linear functional `x ↦ t·x`.
    pub(crate) fn regular_trace(&self) -> CVector {
        CVector::from_iterator(self.dim, self.left.iter().map(|l| l.trace()))
    }

    /// Least-squares solution of the two-sided unit equations and its residual.
    fn solve_unit(&self) -> (CVector, f64) {
        let n = self.dim;
        let mut m = CMatrix::zeros(2 * n * n, n);
        let mut rhs = CVector::zeros(2 * n * n);
        for j in 0..n {
            for k in 0..n {
                let row = j * n + k;
                if j == k {
                    rhs[row] = one();
                    rhs[n * n + row] = one();
                }
                for i in 0..n {
                    m[(row, i)] = self.left[i][(k, j)];
                    m[(n * n + row, i)] = self.left[j][(k, i)];
                }
            }
        }
        let u = crate::linalg::least_squares(&m, &rhs, 1e-12);
        let residual = (&m * &u - &rhs).camax();
        (u, residual)
    }

    /// Largest entry of `L_u - I` and `R_u - I`.
    pub(crate) fn unit_defect_of(&self, u: &CVector) -> f64 {
        let id = CMatrix::identity(self.dim, self.dim);
        let l = (self.left_mul_matrix(u) - &id).camax();
        let r = (self.right_mul_matrix(u) - &id).camax();
        l.max(r)
    }

    /// Detect a unit at tolerance `tol`.
    pub fn detect_unit(&self, tol: f64) -> Option<CVector> {
        let (u, r) = self.solve_unit();
        (r <= tol).then_some(u)
    }

    fn max_constant(&self) -> f64 {
        self.left.iter().map(|l| l.camax()).fold(0.0, f64::max)
    }

    /// Check associativity, the involution laws and the unit on basis elements.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let n = self.dim;
        let scale = 1f64.max(self.max_constant());
        let mut assoc: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                // L is a homomorphism iff the product is associative.
                let eij = self.left[i].column(j).into_owned();
                let lhs = self.left_mul_matrix(&eij);
                let rhs = &self.left[i] * &self.left[j];
                assoc = assoc.max((lhs - rhs).camax());
            }
        }
        let mut invol = (&self.star * self.star.map(|z| z.conj()) - CMatrix::identity(n, n)).camax();
        let stars: Vec<CVector> = (0..n).map(|i| self.star.column(i).into_owned()).collect();
        for i in 0..n {
            for j in 0..n {
                let eij = self.left[i].column(j).into_owned();
                let lhs = self.star_vec(&eij);
                let rhs = self.mul_vec(&stars[j], &stars[i]);
                invol = invol.max((lhs - rhs).camax());
            }
        }
        let unit_defect = match (&self.declared_unit, self.declared_unital) {
            (Some(u), _) => self.unit_defect_of(u),
            (None, Some(true)) => match self.detect_unit(tol) {
                Some(u) => self.unit_defect_of(&u),
                None => self.unit_residual.max(tol * 2.0),
            },
            _ => match self.detect_unit(tol) {
                Some(u) => self.unit_defect_of(&u),
                None => 0.0,
            },
        };
        let assoc = assoc / (scale * scale);
        let invol = invol / scale;
        ValidationReport {
            dim: n,
            associativity_defect: assoc,
            involution_defect: invol,
            unit_defect,
            unital: self.detect_unit(tol).is_some(),
            tol,
            passed: assoc <= tol && invol <= tol && unit_defect <= tol,
        }
    }

    /// The standard unitization `ℂ ⊕ A`, unit at index 0 and `A` on the
    /// remaining coordinates. Always adjoins a new unit.
    pub fn unitize(&self) -> StarAlgebra {
        let n = self.dim;
        let m = n + 1;
        let mut left = vec![CMatrix::zeros(m, m); m];
        left[0] = CMatrix::identity(m, m);
        for i in 0..n {
            let l = &mut left[i + 1];
            l[(i + 1, 0)] = one();
            l.view_mut((1, 1), (n, n)).copy_from(&self.left[i]);
        }
        let mut star = CMatrix::zeros(m, m);
        star[(0, 0)] = one();
        star.view_mut((1, 1), (n, n)).copy_from(&self.star);
        let mut out = StarAlgebra::new(left, star).expect("unitization is well-formed");
        out.unit = Some(out.basis_vector(0));
        if let Some(labels) = &self.labels {
            let mut l = vec!["1".to_string()];
            l.extend(labels.iter().cloned());
            out.labels = Some(l);
        }
        out
    }

    /// The unital hull: `A` itself when unital, otherwise its unitization.
    pub(crate) fn hull(&self) -> Hull<'_> {
        if self.unit.is_some() {
            Hull { alg: HullRef::Same(self), offset: 0 }
        } else {
            let h = self.hull.get_or_init(|| Arc::new(self.unitize()));
            Hull { alg: HullRef::Unitized(h.as_ref()), offset: 1 }
        }
    }
}

enum HullRef<'a> {
    Same(&'a StarAlgebra),
    Unitized(&'a StarAlgebra),
}

/// View of the unital hull of an algebra with coordinate maps.
pub(crate) struct Hull<'a> {
    alg: HullRef<'a>,
    offset: usize,
}

impl Hull<'_> {
    pub fn algebra(&self) -> &StarAlgebra {
        match self.alg {
            HullRef::Same(a) | HullRef::Unitized(a) => a,
        }
    }

    pub fn is_adjoined(&self) -> bool {
        self.offset == 1
    }

    pub fn unit(&self) -> CVector {
        self.algebra().unit().expect("hull is unital").clone()
    }

    pub fn lift(&self, x: &CVector) -> CVector {
        if self.offset == 0 {
            return x.clone();
        }
        let mut out = CVector::zeros(x.len() + 1);
        out.rows_mut(1, x.len()).copy_from(x);
        out
    }

    pub fn lower(&self, x: &CVector) -> CVector {
        if self.offset == 0 {
            return x.clone();
        }
        x.rows(1, x.len() - 1).into_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn complex_numbers_validate_with_zero_defect() {
        let c = instances::complex_numbers();
        let r = c.validate(1e-12);
        assert!(r.passed);
        assert_eq!(r.associativity_defect, 0.0);
        assert_eq!(r.involution_defect, 0.0);
        assert_eq!(r.unit_defect, 0.0);
    }

    #[test]
    fn matrix_algebra_validates() {
        let m2 = instances::matrix_algebra(2);
        let r = m2.validate(DEFAULT_TOL);
        assert!(r.passed, "{r:?}");
        assert!(r.unital);
    }

    #[test]
    fn perturbed_constant_breaks_associativity() {
        let m2 = instances::matrix_algebra(2);
        let mut left = m2.left_matrices().to_vec();
        left[0][(0, 0)] += one();
        let bad = StarAlgebra::new(left, m2.star_matrix().clone()).unwrap();
        let r = bad.validate(DEFAULT_TOL);
        assert!(!r.passed);
        assert!(r.associativity_defect >= 0.1, "{r:?}");
    }

    #[test]
    fn wrong_shapes_are_malformed() {
        let left = vec![CMatrix::zeros(2, 2), CMatrix::zeros(2, 3)];
        assert!(matches!(
            StarAlgebra::new(left, CMatrix::zeros(2, 2)),
            Err(Error::Malformed(_))
        ));
        let left = vec![CMatrix::zeros(1, 1)];
        assert!(matches!(
            StarAlgebra::new(left, CMatrix::zeros(2, 2)),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn false_declared_unit_is_reported() {
        let m2 = instances::matrix_algebra(2);
        let bogus = m2.basis_vector(0);
        let m2 = m2.with_declared_unit(bogus).unwrap();
        let r = m2.validate(DEFAULT_TOL);
        assert!(!r.passed);
        assert!(r.unit_defect > 0.5);
    }

    #[test]
    fn unitize_nilpotent_line() {
        let x = instances::nilpotent_line();
        assert!(!x.is_unital());
        let u = x.unitize();
        assert_eq!(u.dim(), 2);
        assert!(u.is_unital());
        // (λ, μx)(λ', μ'x) = (λλ', (λμ' + λ'μ)x)
        let a = CVector::from_vec(vec![C64::new(2.0, 0.0), C64::new(3.0, 0.0)]);
        let b = CVector::from_vec(vec![C64::new(5.0, 0.0), C64::new(7.0, 0.0)]);
        let p = u.mul_vec(&a, &b);
        assert_eq!(p[0], C64::new(10.0, 0.0));
        assert_eq!(p[1], C64::new(2.0 * 7.0 + 5.0 * 3.0, 0.0));
        assert!(u.validate(DEFAULT_TOL).passed);
    }

    #[test]
    fn unitize_matrix_algebra_adds_new_unit() {
        let u = instances::matrix_algebra(2).unitize();
        assert_eq!(u.dim(), 5);
        assert_eq!(u.unit().unwrap(), &u.basis_vector(0));
    }

    #[test]
    fn unit_detection_ignores_declared_flag() {
        let x = instances::nilpotent_line().with_declared_unital(true);
        assert!(!x.is_unital());
        assert!(!x.validate(DEFAULT_TOL).passed);
    }
}
