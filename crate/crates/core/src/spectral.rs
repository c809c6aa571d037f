//! Orthogonal-projection decompositions of normal elements and the
//! constructions built from them: right/left projections, quasi-inverses,
//! positive square roots, the EP witness and the C*-norm.
//!
//! Spectral idempotents are the Lagrange interpolation idempotents of the
//! clustered roots of the minimal polynomial. They are evaluated on the
//! Hessenberg compression `H = Qᴴ L_b Q` of the Krylov space
//! `span{1, b, b², …}` (as Riesz projectors of `H`), so every `e_j` is a
//! combination of powers of `b` and lies in the subalgebra generated by `b`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::element::projection_defect;
use crate::algebra::poly::krylov;
use crate::algebra::{Element, StarAlgebra};
use crate::linalg::{cluster, cluster_mean, riesz_projector};
use crate::structure::gram_form;
use crate::instances::{random_element, random_positive};
use crate::report::coeff_pairs;
use crate::{CMatrix, CVector, CheckReport, Error, Result, C64};

/// `b = Σ λ_j e_j` with nonzero distinct `λ_j` and nonzero orthogonal projections `e_j`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub terms: Vec<(C64, Element)>,
    pub source: Element,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.terms.iter().map(|(l, _)| *l).collect()
    }

    pub fn reconstruct(&self) -> Element {
        let mut acc = Element::zero(self.source.algebra());
        for (l, p) in &self.terms {
            acc = &acc + &p.scale(*l);
        }
        acc
    }

    /// Worst of the projection, orthogonality and reconstruction defects.
    pub fn residual(&self) -> f64 {
        let terms: Vec<(C64, CVector)> =
            self.terms.iter().map(|(l, p)| (*l, p.coeffs().clone())).collect();
        decomposition_residual(self.source.algebra(), self.source.coeffs(), &terms)
    }

    /// Apply `f` to the eigenvalues: `Σ f(λ_j) e_j`.
    pub fn apply<F: Fn(C64) -> C64>(&self, f: F) -> Element {
        let mut acc = Element::zero(self.source.algebra());
        for (l, p) in &self.terms {
            acc = &acc + &p.scale(f(*l));
        }
        acc
    }
}

/// Idempotents for the nonzero root clusters of the minimal polynomial of `b`.
/// No certification is done here; empty when the Schur iteration fails.
///
/// The Krylov iteration runs three orders of magnitude below `tol`; stopping
/// at `tol` leaves a compression error of the size of the certification bound.
pub(crate) fn spectral_parts(alg: &StarAlgebra, b: &CVector, tol: f64) -> Vec<(C64, CVector)> {
    let Ok(Some(k)) = krylov(alg, b, tol * 1e-3) else {
        return Vec::new();
    };
    let hull = alg.hull();
    let mut out = Vec::new();
    for members in cluster(&k.roots, tol) {
        let mean = cluster_mean(&k.roots, &members);
        if mean.norm() <= tol {
            continue;
        }
        let p = riesz_projector(&k.z, &k.t, &members);
        let e_hull = &k.arnoldi.q * p.column(0) * C64::from(k.unit_norm);
        out.push((mean * k.scale, hull.lower(&e_hull)));
    }
    out
}

pub(crate) fn decomposition_residual(alg: &StarAlgebra, b: &CVector, terms: &[(C64, CVector)]) -> f64 {
    let mut worst: f64 = 0.0;
    let mut recon = CVector::zeros(alg.dim());
    for (i, (l, p)) in terms.iter().enumerate() {
        worst = worst.max(projection_defect(alg, p));
        if p.norm() <= f64::EPSILON {
            worst = f64::INFINITY;
        }
        for (_, q) in &terms[i + 1..] {
            let s = 1f64.max(p.norm() * q.norm());
            worst = worst.max(alg.mul_vec(p, q).norm() / s);
        }
        recon += p * *l;
    }
    let bn = b.norm();
    if bn > 0.0 {
        worst = worst.max((b - recon).norm() / bn);
    }
    worst
}

/// Decompose a normal element into `Σ λ_j e_j`.
pub fn spectral_decompose(b: &Element, tol: f64) -> Result<SpectralDecomposition> {
    let alg = b.algebra();
    let bn = b.norm();
    if bn == 0.0 {
        return Ok(SpectralDecomposition { terms: Vec::new(), source: b.clone() });
    }
    let defect = b.normality_defect() / (bn * bn);
    if defect > tol {
        return Err(Error::NonNormal { defect });
    }
    let terms = spectral_parts(alg, b.coeffs(), tol);
    let residual = decomposition_residual(alg, b.coeffs(), &terms);
    if residual > tol {
        return Err(Error::DecompositionFailed { residual });
    }
    Ok(SpectralDecomposition {
        terms: terms.into_iter().map(|(l, p)| (l, Element::from_vec(alg, p))).collect(),
        source: b.clone(),
    })
}

/// Spectral data of `a*a`.
fn gram_parts(alg: &StarAlgebra, a: &CVector, tol: f64) -> Vec<(C64, CVector)> {
    let astar_a = alg.mul_vec(&alg.star_vec(a), a);
    spectral_parts(alg, &astar_a, tol)
}

/// `Σ e_j` over the spectral projections of `a*a`, uncertified.
pub(crate) fn right_projection_vec(alg: &StarAlgebra, a: &CVector, tol: f64) -> CVector {
    let mut e = CVector::zeros(alg.dim());
    for (_, p) in gram_parts(alg, a, tol) {
        e += p;
    }
    e
}

/// Residuals of a right-projection candidate `e` for `a`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RpResiduals {
    /// `‖e − e*‖`, `‖e − e²‖` relative to `max(1, ‖e‖)`.
    pub projection: f64,
    /// `‖ae − a‖ / ‖a‖`.
    pub absorb: f64,
    /// `max ‖e y‖` over an orthonormal basis of `{y : ay = 0}`.
    pub kernel: f64,
    /// Condition number of `y ↦ ay` on its range.
    pub kappa: f64,
}

impl RpResiduals {
    pub fn worst(&self) -> f64 {
        self.projection.max(self.absorb).max(self.kernel)
    }

    /// `projection, absorb ≤ tol` and `kernel ≤ tol · κ`.
    pub fn passes(&self, tol: f64) -> bool {
        self.projection <= tol && self.absorb <= tol && self.kernel <= tol * self.kappa.max(1.0)
    }
}

pub(crate) fn rp_residuals(alg: &StarAlgebra, a: &CVector, e: &CVector, tol: f64) -> RpResiduals {
    let an = a.norm();
    let projection = projection_defect(alg, e);
    let absorb = if an == 0.0 { 0.0 } else { (alg.mul_vec(a, e) - a).norm() / an };
    let la = alg.left_mul_matrix(a);
    let ker = crate::linalg::kernel(&la, tol);
    let le = alg.left_mul_matrix(e);
    let kernel = if ker.ncols() == 0 {
        0.0
    } else {
        (0..ker.ncols())
            .map(|c| (&le * ker.column(c)).norm())
            .fold(0.0, f64::max)
    };
    RpResiduals { projection, absorb, kernel, kappa: crate::linalg::condition_number(&la, tol) }
}

/// `RP(a) = Σ e_j` where `a*a = Σ λ_j e_j`; certified against `ae = a` and
/// `ay = 0 ⇒ ey = 0`.
pub fn right_projection(a: &Element, tol: f64) -> Result<Element> {
    let alg = a.algebra();
    if a.norm() == 0.0 {
        return Ok(Element::zero(alg));
    }
    let e = right_projection_vec(alg, a.coeffs(), tol);
    let r = rp_residuals(alg, a.coeffs(), &e, tol);
    if !r.passes(tol) {
        return Err(Error::DecompositionFailed { residual: r.worst() });
    }
    Ok(Element::from_vec(alg, e))
}

/// `LP(a) = RP(a*)`.
pub fn left_projection(a: &Element, tol: f64) -> Result<Element> {
    right_projection(&a.star(), tol)
}

/// `x = (Σ λ_j⁻¹ e_j) a*`, satisfying `axa = a` and `xax = x`.
pub fn quasi_inverse(a: &Element, tol: f64) -> Result<Element> {
    let alg = a.algebra();
    let an = a.norm();
    if an == 0.0 {
        return Ok(Element::zero(alg));
    }
    let mut inv = CVector::zeros(alg.dim());
    for (l, p) in gram_parts(alg, a.coeffs(), tol) {
        inv += p / l;
    }
    let x = alg.mul_vec(&inv, &alg.star_vec(a.coeffs()));
    let axa = alg.mul_vec(&alg.mul_vec(a.coeffs(), &x), a.coeffs());
    let residual = (axa - a.coeffs()).norm() / an;
    if residual > tol {
        return Err(Error::DecompositionFailed { residual });
    }
    Ok(Element::from_vec(alg, x))
}

fn check_positive(d: &SpectralDecomposition, tol: f64) -> Result<()> {
    let scale = d.terms.iter().map(|(l, _)| l.norm()).fold(0.0, f64::max);
    for (l, _) in &d.terms {
        if l.im.abs() > tol * scale || l.re < -tol * scale {
            return Err(Error::NotPositive { value: if l.re < 0.0 { l.re } else { -l.im.abs() } });
        }
    }
    Ok(())
}

fn check_selfadjoint(x: &Element, tol: f64) -> Result<()> {
    let xn = x.norm();
    if xn > 0.0 && x.selfadjoint_defect() / xn > tol {
        return Err(Error::NotPositive { value: f64::NAN });
    }
    Ok(())
}

/// The positive `y` with `y² = x`, `y = Σ √λ_j e_j`.
pub fn positive_sqrt(x: &Element, tol: f64) -> Result<Element> {
    check_selfadjoint(x, tol)?;
    let d = spectral_decompose(x, tol)?;
    check_positive(&d, tol)?;
    let y = d.apply(|l| C64::new(l.re.max(0.0).sqrt(), 0.0));
    let xn = x.norm();
    if xn > 0.0 {
        let residual = (&(&y * &y) - x).norm() / xn;
        if residual > tol {
            return Err(Error::DecompositionFailed { residual });
        }
    }
    Ok(y)
}

/// Selfadjoint `w = Σ λ_j^{-1/2} e_j` (over `a*a = Σ λ_j e_j`) such that
/// `(a*a) w²` is the nonzero projection `RP(a)`.
pub fn ep_witness(a: &Element, tol: f64) -> Result<Element> {
    let alg = a.algebra();
    if a.norm() == 0.0 {
        return Err(Error::Degenerate("EP witness needs a nonzero element".into()));
    }
    let parts = gram_parts(alg, a.coeffs(), tol);
    if parts.is_empty() {
        return Err(Error::DecompositionFailed { residual: f64::INFINITY });
    }
    let mut w = CVector::zeros(alg.dim());
    for (l, p) in &parts {
        if l.re <= 0.0 {
            return Err(Error::NotPositive { value: l.re });
        }
        w += p * C64::new(l.re.powf(-0.5), 0.0);
    }
    let astar_a = alg.mul_vec(&alg.star_vec(a.coeffs()), a.coeffs());
    let proj = alg.mul_vec(&astar_a, &alg.mul_vec(&w, &w));
    let residual = projection_defect(alg, &proj);
    if residual > tol || proj.norm() <= tol {
        return Err(Error::Certification { what: "EP witness", residual });
    }
    Ok(Element::from_vec(alg, w))
}

/// Faithful *-representation by left multiplication on the unital hull,
/// orthonormalised for the trace form `⟨x, y⟩ = tr L_{y* x}`.
pub(crate) struct RegularRep {
    /// `Cᴴ` where `G = C Cᴴ`.
    ch: CMatrix,
    ch_inv: CMatrix,
}

impl RegularRep {
    pub fn new(alg: &StarAlgebra, tol: f64) -> Result<Self> {
        let hull = alg.hull();
        let g = gram_form(hull.algebra());
        let (vals, _) = crate::linalg::hermitian_eigen(&g);
        let max = vals.iter().copied().fold(0.0, f64::max);
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        if max <= 0.0 || min <= tol * max {
            return Err(Error::NoCstarNorm { min_eigenvalue: min });
        }
        let g = (&g + g.adjoint()) * C64::from(0.5);
        let chol = g.cholesky().ok_or(Error::NoCstarNorm { min_eigenvalue: min })?;
        let ch = chol.l().adjoint();
        let ch_inv = ch.clone().try_inverse().ok_or(Error::NoCstarNorm { min_eigenvalue: min })?;
        Ok(RegularRep { ch, ch_inv })
    }

    pub fn matrix(&self, alg: &StarAlgebra, x: &CVector) -> CMatrix {
        let hull = alg.hull();
        let lx = hull.algebra().left_mul_matrix(&hull.lift(x));
        &self.ch * lx * &self.ch_inv
    }
}

/// The unique C*-norm: operator norm in a faithful *-representation.
pub fn cstar_norm(a: &Element, tol: f64) -> Result<f64> {
    let alg = a.algebra();
    let rep = RegularRep::new(alg, tol)?;
    let m = rep.matrix(alg, a.coeffs());
    Ok(crate::linalg::spectral_norm(&m))
}

/// Run `f` on `samples` random elements drawn by `draw`; the report fails on
/// the first error and records the largest residual.
fn sample_check<D, F>(property: &str, alg: &Arc<StarAlgebra>, samples: usize, seed: u64, draw: D, f: F) -> CheckReport
where
    D: Fn(&Arc<StarAlgebra>, &mut ChaCha8Rng) -> Element,
    F: Fn(&Element) -> Result<f64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let a = draw(alg, &mut rng);
        match f(&a) {
            Ok(r) => worst = worst.max(r),
            Err(e) => {
                return CheckReport::new(property, false, f64::INFINITY, seed)
                    .with_witness(json!({"element": coeff_pairs(a.coeffs()), "error": e.to_string()}));
            }
        }
    }
    CheckReport::new(property, true, worst, seed).with_witness(json!({ "elements_checked": samples }))
}

/// Every sampled element has a quasi-inverse; the residual is `‖axa − a‖ / ‖a‖`.
pub fn check_regular(alg: &Arc<StarAlgebra>, samples: usize, tol: f64, seed: u64) -> CheckReport {
    sample_check("regular", alg, samples, seed, random_element, |a| {
        let x = quasi_inverse(a, tol)?;
        Ok((&(&(a * &x) * a) - a).norm() / a.norm().max(f64::MIN_POSITIVE))
    })
}

/// Every sampled `a*a` has a positive square root; the residual is `‖y² − x‖ / ‖x‖`.
pub fn check_sqrt(alg: &Arc<StarAlgebra>, samples: usize, tol: f64, seed: u64) -> CheckReport {
    sample_check("sqrt", alg, samples, seed, random_positive, |x| {
        let y = positive_sqrt(x, tol)?;
        Ok((&(&y * &y) - x).norm() / x.norm().max(f64::MIN_POSITIVE))
    })
}
