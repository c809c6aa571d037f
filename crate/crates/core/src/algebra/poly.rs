//! Minimal polynomials and spectra via the Krylov sequence `1, a, a², …`
//! of the left-regular representation on the unital hull.

use serde::{Deserialize, Serialize};

use super::{Element, StarAlgebra};
use crate::linalg::{arnoldi, cluster, cluster_mean, schur, Arnoldi};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Monic polynomial, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<C64>,
    roots: Vec<C64>,
}

impl Polynomial {
    pub fn from_roots(roots: Vec<C64>) -> Self {
        let mut coeffs = vec![C64::new(1.0, 0.0)];
        for r in &roots {
            let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        Polynomial { coeffs, roots }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Roots with multiplicity, as computed.
    pub fn roots(&self) -> &[C64] {
        &self.roots
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
    }
}

/// Finite, non-empty set of spectral values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub points: Vec<C64>,
    /// Set when the algebra is non-unital and 0 is part of the spectrum by convention.
    pub includes_forced_zero: bool,
}

impl Spectrum {
    /// Whether `z` lies within `tol · max(1, |z|)` of some spectral point.
    pub fn contains(&self, z: C64, tol: f64) -> bool {
        self.points.iter().any(|p| (p - z).norm() <= tol * 1f64.max(z.norm()))
    }

    /// Set equality up to `tol`.
    pub fn same_set(&self, other: &Spectrum, tol: f64) -> bool {
        self.points.iter().all(|&p| other.contains(p, tol))
            && other.points.iter().all(|&p| self.contains(p, tol))
    }
}

/// Krylov data for an element: the Hessenberg compression of its scaled
/// left-multiplication operator on the hull and its Schur form.
pub(crate) struct KrylovData {
    pub arnoldi: Arnoldi,
    pub z: CMatrix,
    pub t: CMatrix,
    /// Eigenvalues of the compression, in units of `scale`.
    pub roots: Vec<C64>,
    pub scale: f64,
    /// Norm of the hull unit (start vector of the iteration).
    pub unit_norm: f64,
}

/// `Ok(None)` for `x = 0`; fails when the Schur iteration does not converge.
pub(crate) fn krylov(alg: &StarAlgebra, x: &CVector, tol: f64) -> Result<Option<KrylovData>> {
    let hull = alg.hull();
    let h = hull.algebra();
    let lx = h.left_mul_matrix(&hull.lift(x));
    let scale = lx.norm();
    if scale == 0.0 {
        return Ok(None);
    }
    let op = lx / C64::from(scale);
    let u = hull.unit();
    let ar = arnoldi(&op, &u, tol);
    let (z, t) = schur(&ar.h).ok_or(Error::IllConditioned { residual: f64::INFINITY })?;
    let roots = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    Ok(Some(KrylovData {
        arnoldi: ar,
        z,
        t,
        roots,
        scale,
        unit_norm: u.norm(),
    }))
}

/// Order points so that each next one maximises the product of distances to
/// the previous ones.
fn leja_order(points: &[C64]) -> Vec<C64> {
    let mut rest: Vec<C64> = points.to_vec();
    let mut out = Vec::with_capacity(points.len());
    if rest.is_empty() {
        return out;
    }
    let first = rest
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, _)| i)
        .unwrap();
    out.push(rest.swap_remove(first));
    while !rest.is_empty() {
        let idx = rest
            .iter()
            .enumerate()
            .map(|(i, p)| (i, out.iter().map(|q| (p - q).norm().ln()).sum::<f64>()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
            .unwrap();
        out.push(rest.swap_remove(idx));
    }
    out
}

/// The monic polynomial of least degree annihilating `a`, computed in the
/// unital hull.
///
/// Fails with [`Error::IllConditioned`] when the Krylov rank decision falls
/// within two orders of magnitude of `tol`, or when the product form
/// `Π (a − θ_i)` does not vanish to `tol` relative to `Π (‖a‖ + |θ_i|)`.
pub fn minimal_polynomial(a: &Element, tol: f64) -> Result<Polynomial> {
    let alg = a.algebra();
    let Some(k) = krylov(alg, a.coeffs(), tol)? else {
        return Ok(Polynomial::from_roots(vec![C64::new(0.0, 0.0)]));
    };
    let d = k.arnoldi.h.nrows();
    let min_sub = (0..d.saturating_sub(1))
        .map(|i| k.arnoldi.h[(i + 1, i)].norm())
        .fold(f64::INFINITY, f64::min);
    if min_sub <= 100.0 * tol {
        return Err(Error::IllConditioned { residual: min_sub });
    }
    let hull = alg.hull();
    let h = hull.algebra();
    let op = h.left_mul_matrix(&hull.lift(a.coeffs())) / C64::from(k.scale);
    let mut v = hull.unit();
    let mut bound = 1.0;
    for theta in leja_order(&k.roots) {
        v = &op * &v - &v * theta;
        bound *= 1.0 + theta.norm();
    }
    let residual = v.norm() / k.unit_norm / bound;
    if residual > tol {
        return Err(Error::IllConditioned { residual });
    }
    let roots = k.roots.iter().map(|r| r * k.scale).collect();
    Ok(Polynomial::from_roots(roots))
}

/// Spectrum of `a`: the distinct roots of its minimal polynomial, clustered
/// at `tol`. For non-unital algebras 0 is included and flagged.
pub fn spectrum(a: &Element, tol: f64) -> Result<Spectrum> {
    let alg = a.algebra();
    let forced = !alg.is_unital();
    let p = minimal_polynomial(a, tol)?;
    let scale = alg
        .hull()
        .algebra()
        .left_mul_matrix(&alg.hull().lift(a.coeffs()))
        .norm();
    let scaled: Vec<C64> = if scale > 0.0 {
        p.roots().iter().map(|r| r / scale).collect()
    } else {
        p.roots().to_vec()
    };
    let mut points: Vec<C64> = cluster(&scaled, tol)
        .iter()
        .map(|g| {
            let m = cluster_mean(&scaled, g);
            if m.norm() <= tol {
                C64::new(0.0, 0.0)
            } else if scale > 0.0 {
                m * scale
            } else {
                m
            }
        })
        .collect();
    if forced && !points.iter().any(|p| p.norm() == 0.0) {
        points.push(C64::new(0.0, 0.0));
    }
    points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(Spectrum { points, includes_forced_zero: forced })
}

/// Eigenvalues of the Krylov compression, unverified; used for spot checks.
pub(crate) fn ritz_values(alg: &StarAlgebra, x: &CVector, tol: f64) -> Vec<C64> {
    match krylov(alg, x, tol) {
        Ok(Some(k)) => k.roots.iter().map(|r| r * k.scale).collect(),
        Ok(None) => vec![C64::new(0.0, 0.0)],
        Err(_) => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::instances;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn close_roots(p: &Polynomial, expect: &[C64], tol: f64) -> bool {
        let mut roots = p.roots().to_vec();
        if roots.len() != expect.len() {
            return false;
        }
        for e in expect {
            let Some(i) = roots.iter().position(|r| (r - e).norm() <= tol) else {
                return false;
            };
            roots.swap_remove(i);
        }
        true
    }

    #[test]
    fn diagonal_element_has_product_minimal_polynomial() {
        let d = Arc::new(instances::diagonal_algebra(2));
        let a = Element::from_real(&d, &[2.0, 5.0]).unwrap();
        let p = minimal_polynomial(&a, 1e-9).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(close_roots(&p, &[c(2.0), c(5.0)], 1e-10));
        // (z-2)(z-5) = z² - 7z + 10
        assert!((p.coeffs()[0] - c(10.0)).norm() < 1e-9);
        assert!((p.coeffs()[1] - c(-7.0)).norm() < 1e-9);
    }

    #[test]
    fn nilpotent_matrix_unit_gives_z_squared() {
        let m2 = Arc::new(instances::matrix_algebra(2));
        let p = minimal_polynomial(&Element::basis(&m2, 1), 1e-9).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(p.coeffs()[0].norm() < 1e-12 && p.coeffs()[1].norm() < 1e-12);
    }

    #[test]
    fn flip_matrix_gives_z_squared_minus_one() {
        let m2 = Arc::new(instances::matrix_algebra(2));
        let a = Element::from_real(&m2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let p = minimal_polynomial(&a, 1e-9).unwrap();
        // oracle: Krylov vectors 1 = (1,0,0,1), a = (0,1,1,0), a² = 1, so a² − 1 = 0
        let sq = a.pow(2);
        assert!(sq.approx_eq(&Element::one(&m2).unwrap(), 1e-15));
        assert_eq!(p.degree(), 2);
        assert!((p.coeffs()[0] - c(-1.0)).norm() < 1e-9);
        assert!(p.coeffs()[1].norm() < 1e-9);
    }

    #[test]
    fn zero_element_has_minimal_polynomial_z() {
        let m2 = Arc::new(instances::matrix_algebra(2));
        let p = minimal_polynomial(&Element::zero(&m2), 1e-9).unwrap();
        assert_eq!(p.degree(), 1);
    }

    #[test]
    fn spectrum_of_diagonal_element() {
        let d = Arc::new(instances::diagonal_algebra(2));
        let a = Element::from_real(&d, &[2.0, 5.0]).unwrap();
        let s = spectrum(&a, 1e-9).unwrap();
        assert!(!s.includes_forced_zero);
        assert_eq!(s.points.len(), 2);
        assert!(s.contains(c(2.0), 1e-9) && s.contains(c(5.0), 1e-9));
    }

    #[test]
    fn non_unital_spectrum_forces_zero() {
        let x = Arc::new(instances::nilpotent_line());
        let s = spectrum(&Element::basis(&x, 0), 1e-9).unwrap();
        assert!(s.includes_forced_zero);
        assert_eq!(s.points, vec![c(0.0)]);
    }

    #[test]
    fn unitized_nilpotent_has_spectrum_zero() {
        let u = Arc::new(instances::nilpotent_line().unitize());
        let x = Element::basis(&u, 1);
        let p = minimal_polynomial(&x, 1e-9).unwrap();
        assert_eq!(p.degree(), 2);
        let s = spectrum(&x, 1e-9).unwrap();
        assert_eq!(s.points, vec![c(0.0)]);
        assert!(!s.includes_forced_zero);
    }

    #[test]
    fn products_of_matrix_units_share_spectrum() {
        let m2 = Arc::new(instances::matrix_algebra(2));
        let e12 = Element::basis(&m2, 1);
        let e21 = Element::basis(&m2, 2);
        let s1 = spectrum(&(&e12 * &e21), 1e-9).unwrap();
        let s2 = spectrum(&(&e21 * &e12), 1e-9).unwrap();
        assert!(s1.same_set(&s2, 1e-9));
        assert!(s1.contains(c(0.0), 1e-9) && s1.contains(c(1.0), 1e-9));
    }

    #[test]
    fn leja_order_is_a_permutation() {
        let pts = [c(1.0), c(-1.0), c(0.5), c(3.0)];
        let mut o = leja_order(&pts);
        o.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert_eq!(o, vec![c(-1.0), c(0.5), c(1.0), c(3.0)]);
    }
}
