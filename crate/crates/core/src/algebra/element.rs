use std::ops;
use std::sync::Arc;

use super::StarAlgebra;
use crate::{CVector, Error, Result, C64};

/// A coefficient vector over the basis of a shared [`StarAlgebra`].
///
/// The checked methods (`try_mul`, `try_add`, ...) return
/// [`Error::ParentMismatch`] for elements of different algebras; the
/// operator impls panic in that case.
#[derive(Clone, Debug)]
pub struct Element {
    alg: Arc<StarAlgebra>,
    coeffs: CVector,
}

impl Element {
    pub fn new(alg: &Arc<StarAlgebra>, coeffs: CVector) -> Result<Self> {
        if coeffs.len() != alg.dim() {
            return Err(Error::Malformed(format!(
                "element has {} coefficients, algebra dimension is {}",
                coeffs.len(),
                alg.dim()
            )));
        }
        Ok(Element { alg: alg.clone(), coeffs })
    }

    pub(crate) fn from_vec(alg: &Arc<StarAlgebra>, coeffs: CVector) -> Self {
        debug_assert_eq!(coeffs.len(), alg.dim());
        Element { alg: alg.clone(), coeffs }
    }

    pub fn from_real(alg: &Arc<StarAlgebra>, coeffs: &[f64]) -> Result<Self> {
        Self::new(alg, CVector::from_iterator(coeffs.len(), coeffs.iter().map(|&r| C64::new(r, 0.0))))
    }

    pub fn zero(alg: &Arc<StarAlgebra>) -> Self {
        Element { alg: alg.clone(), coeffs: CVector::zeros(alg.dim()) }
    }

    pub fn one(alg: &Arc<StarAlgebra>) -> Result<Self> {
        let u = alg.unit().ok_or(Error::NotUnital)?.clone();
        Ok(Element { alg: alg.clone(), coeffs: u })
    }

    pub fn basis(alg: &Arc<StarAlgebra>, i: usize) -> Self {
        Element { alg: alg.clone(), coeffs: alg.basis_vector(i) }
    }

    pub fn algebra(&self) -> &Arc<StarAlgebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &CVector {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> CVector {
        self.coeffs
    }

    pub fn same_parent(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg)
    }

    fn check(&self, other: &Element) -> Result<()> {
        if self.same_parent(other) {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(Element::from_vec(&self.alg, self.alg.mul_vec(&self.coeffs, &other.coeffs)))
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(Element::from_vec(&self.alg, &self.coeffs + &other.coeffs))
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(Element::from_vec(&self.alg, &self.coeffs - &other.coeffs))
    }

    pub fn scale(&self, s: C64) -> Element {
        Element::from_vec(&self.alg, &self.coeffs * s)
    }

    pub fn star(&self) -> Element {
        Element::from_vec(&self.alg, self.alg.star_vec(&self.coeffs))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    /// `‖a − b‖ ≤ tol · max(1, ‖a‖, ‖b‖)`.
    pub fn approx_eq(&self, other: &Element, tol: f64) -> bool {
        let scale = 1f64.max(self.norm()).max(other.norm());
        (&self.coeffs - &other.coeffs).norm() <= tol * scale
    }

    pub fn selfadjoint_defect(&self) -> f64 {
        (&self.coeffs - self.alg.star_vec(&self.coeffs)).norm()
    }

    pub fn normality_defect(&self) -> f64 {
        let s = self.alg.star_vec(&self.coeffs);
        let a = self.alg.mul_vec(&s, &self.coeffs);
        let b = self.alg.mul_vec(&self.coeffs, &s);
        (a - b).norm()
    }

    /// Largest of `‖p − p*‖` and `‖p − p²‖`, relative to `max(1, ‖p‖)`.
    pub fn projection_defect(&self) -> f64 {
        projection_defect(&self.alg, &self.coeffs)
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.projection_defect() <= tol
    }

    pub fn pow(&self, k: u32) -> Element {
        let mut acc: Option<CVector> = None;
        for _ in 0..k {
            acc = Some(match acc {
                None => self.coeffs.clone(),
                Some(v) => self.alg.mul_vec(&v, &self.coeffs),
            });
        }
        match acc {
            Some(v) => Element::from_vec(&self.alg, v),
            None => Element::one(&self.alg).unwrap_or_else(|_| Element::zero(&self.alg)),
        }
    }
}

pub(crate) fn projection_defect(alg: &StarAlgebra, p: &crate::CVector) -> f64 {
    let scale = 1f64.max(p.norm());
    let sa = (p - alg.star_vec(p)).norm();
    let idem = (p - alg.mul_vec(p, p)).norm();
    sa.max(idem) / scale
}

impl ops::Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).expect("elements of different algebras")
    }
}

impl ops::Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("elements of different algebras")
    }
}

impl ops::Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_sub(rhs).expect("elements of different algebras")
    }
}

impl ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(C64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn m2() -> Arc<StarAlgebra> {
        Arc::new(instances::matrix_algebra(2))
    }

    #[test]
    fn matrix_unit_product() {
        let a = m2();
        // basis order: E11, E12, E21, E22
        let e12 = Element::basis(&a, 1);
        let e21 = Element::basis(&a, 2);
        let e11 = Element::basis(&a, 0);
        assert!((&e12 * &e21).approx_eq(&e11, 1e-15));
    }

    #[test]
    fn star_of_e12_is_e21() {
        let a = m2();
        assert!(Element::basis(&a, 1).star().approx_eq(&Element::basis(&a, 2), 1e-15));
    }

    #[test]
    fn swap_star_on_c2() {
        let a = Arc::new(instances::swap_c2());
        let x = Element::from_real(&a, &[1.0, 0.0]).unwrap();
        let y = Element::from_real(&a, &[0.0, 1.0]).unwrap();
        assert!(x.star().approx_eq(&y, 0.0));
    }

    #[test]
    fn parent_mismatch_is_an_error() {
        let a = m2();
        let b = m2();
        let x = Element::basis(&a, 0);
        let y = Element::basis(&b, 0);
        assert!(matches!(x.try_mul(&y), Err(Error::ParentMismatch)));
        assert!(matches!(x.try_add(&y), Err(Error::ParentMismatch)));
    }

    #[test]
    fn wrong_length_is_malformed() {
        let a = m2();
        assert!(Element::from_real(&a, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn star_is_antilinear() {
        let a = m2();
        let x = Element::basis(&a, 1).scale(C64::new(0.0, 2.0));
        let expect = Element::basis(&a, 2).scale(C64::new(0.0, -2.0));
        assert!(x.star().approx_eq(&expect, 1e-15));
    }
}
