//! Trace forms, the radical, properness and the hermitian check.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::poly::ritz_values;
use crate::algebra::{Element, StarAlgebra};
use crate::instances::random_vector;
use crate::linalg::{column_space, hermitian_eigen, kernel, orthogonal_complement};
use crate::report::coeff_pairs;
use crate::spectral::spectral_parts;
use crate::{CMatrix, CVector, CheckReport, C64};

/// `W[l][i] = tr(L_{e_l e_i})`, the bilinear trace form.
pub(crate) fn trace_form(alg: &StarAlgebra) -> CMatrix {
    let n = alg.dim();
    let t = alg.regular_trace();
    let mut w = CMatrix::zeros(n, n);
    for (l, m) in alg.left_matrices().iter().enumerate() {
        let row = t.transpose() * m;
        w.set_row(l, &row);
    }
    w
}

/// Gram matrix `G` of the sesquilinear form `⟨x, y⟩ = tr(L_{y* x}) = yᴴ G x`.
pub(crate) fn gram_form(alg: &StarAlgebra) -> CMatrix {
    alg.star_matrix().transpose() * trace_form(alg)
}

/// Orthonormal basis (columns, coordinates of `A`) of the kernel of the
/// trace form on the unital hull.
pub(crate) fn radical_basis(alg: &StarAlgebra, tol: f64) -> CMatrix {
    let hull = alg.hull();
    let h = hull.algebra();
    let ker = kernel(&trace_form(h), tol);
    if !hull.is_adjoined() || ker.ncols() == 0 {
        return ker;
    }
    let lowered = CMatrix::from_columns(
        &(0..ker.ncols()).map(|c| hull.lower(&ker.column(c).into_owned())).collect::<Vec<_>>(),
    );
    column_space(&lowered, tol)
}

/// Basis of the Jacobson radical, computed as the kernel of the trace form
/// `(a, b) ↦ tr(L_{ab})` on the unital hull.
pub fn radical(alg: &Arc<StarAlgebra>, tol: f64) -> Vec<Element> {
    let b = radical_basis(alg, tol);
    (0..b.ncols())
        .map(|c| Element::from_vec(alg, b.column(c).into_owned()))
        .collect()
}

/// `‖x^n‖` for unit-norm `x` with `n` the hull dimension; zero for nilpotents.
pub(crate) fn nilpotency_residual(alg: &StarAlgebra, x: &CVector) -> f64 {
    let n = alg.dim() + 1;
    let x = x / C64::from(x.norm().max(f64::MIN_POSITIVE));
    let mut p = x.clone();
    for _ in 1..n {
        p = alg.mul_vec(&p, &x);
    }
    p.norm()
}

/// The quotient by the span of the orthonormal columns of `ideal`, or `None`
/// when the quotient is zero.
pub(crate) fn quotient(alg: &StarAlgebra, ideal: &CMatrix, tol: f64) -> Option<StarAlgebra> {
    if ideal.ncols() == 0 {
        return Some(alg.clone());
    }
    let comp = orthogonal_complement(ideal, tol);
    let m = comp.ncols();
    if m == 0 {
        return None;
    }
    let cols: Vec<CVector> = (0..m).map(|i| comp.column(i).into_owned()).collect();
    let mut left = vec![CMatrix::zeros(m, m); m];
    let mut star = CMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let p = alg.mul_vec(&cols[i], &cols[j]);
            left[i].set_column(j, &(comp.adjoint() * p));
        }
        star.set_column(i, &(comp.adjoint() * alg.star_vec(&cols[i])));
    }
    StarAlgebra::new(left, star).ok()
}

fn star_product_ratio(alg: &StarAlgebra, a: &CVector) -> f64 {
    let n = a.norm();
    if n == 0.0 {
        return f64::INFINITY;
    }
    alg.mul_vec(&alg.star_vec(a), a).norm() / (n * n)
}

/// Candidate elements with `a*a = 0`: squared-down radical elements, basis
/// elements, isotropic Gram directions and spectral idempotents of random
/// elements. Returns the best candidate and its ratio `‖a*a‖ / ‖a‖²`.
fn search_isotropic(alg: &StarAlgebra, gram: &CMatrix, tol: f64, seed: u64) -> Option<(CVector, f64)> {
    let n = alg.dim();
    let mut cands: Vec<CVector> = Vec::new();
    let rad = radical_basis(alg, tol);
    for c in 0..rad.ncols() {
        let mut x = rad.column(c).into_owned();
        for _ in 0..64 {
            let y = alg.mul_vec(&alg.star_vec(&x), &x);
            if y.norm() <= tol * x.norm() * x.norm() {
                break;
            }
            x = &y / C64::from(y.norm());
        }
        cands.push(x);
    }
    for i in 0..n {
        cands.push(alg.basis_vector(i));
    }
    let (vals, vecs) = hermitian_eigen(gram);
    let max = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let pos: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > tol * max).collect();
    let nonpos: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] <= tol * max).collect();
    for &q in &nonpos {
        cands.push(vecs.column(q).into_owned());
        if vals[q] < -tol * max {
            for &p in &pos {
                let a = vecs.column(p) * C64::from((-vals[q]).sqrt())
                    + vecs.column(q) * C64::from(vals[p].sqrt());
                cands.push(a);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 {
        let b = random_vector(n, &mut rng);
        for (_, e) in spectral_parts(alg, &b, tol) {
            cands.push(e);
        }
    }
    cands
        .into_iter()
        .filter(|c| c.norm() > 0.0)
        .map(|c| {
            let r = star_product_ratio(alg, &c);
            (c, r)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Properness via positive definiteness of `⟨x, y⟩ = tr(L_{y* x})` on the
/// unital hull. `worst_residual` is the minimum Gram eigenvalue relative to
/// the largest. Failures carry the best `a*a = 0` witness found.
pub fn check_proper(alg: &StarAlgebra, tol: f64, seed: u64) -> CheckReport {
    let hull = alg.hull();
    let g = gram_form(hull.algebra());
    let herm_defect = (&g - g.adjoint()).camax() / g.camax().max(f64::MIN_POSITIVE);
    let (vals, _) = hermitian_eigen(&g);
    let max = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let rel_min = if max > 0.0 { min / max } else { 0.0 };
    let pass = herm_defect <= tol && rel_min > tol;
    let mut witness = json!({
        "gram_min_eigenvalue": min,
        "gram_max_eigenvalue": max,
        "gram_hermitian_defect": herm_defect,
    });
    if !pass {
        let ga = gram_form(alg);
        if let Some((a, ratio)) = search_isotropic(alg, &ga, tol, seed) {
            witness["element"] = json!(coeff_pairs(&(&a / C64::from(a.norm()))));
            witness["star_product_ratio"] = json!(ratio);
        }
    }
    CheckReport::new("proper", pass, rel_min, seed).with_witness(witness)
}

/// Hermitian check: the quotient by the radical is proper, and random
/// selfadjoint elements have real spectra (imaginary parts below `√tol`
/// relative to the spectral radius).
pub fn check_hermitian(alg: &StarAlgebra, tol: f64, seed: u64) -> CheckReport {
    let rad = radical_basis(alg, tol);
    let quotient_proper = match quotient(alg, &rad, tol) {
        None => true,
        Some(q) => check_proper(&q, tol, seed).pass,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut worst_imag: f64 = 0.0;
    for _ in 0..4 {
        let a = random_vector(alg.dim(), &mut rng);
        let s = (&a + alg.star_vec(&a)) * C64::from(0.5);
        let ritz = ritz_values(alg, &s, tol);
        let scale = ritz.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale > 0.0 {
            let im = ritz.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            worst_imag = worst_imag.max(im / scale);
        }
    }
    let spot_ok = worst_imag <= tol.sqrt();
    CheckReport::new("hermitian", quotient_proper && spot_ok, worst_imag, seed).with_witness(json!({
        "radical_dim": rad.ncols(),
        "quotient_proper": quotient_proper,
        "max_relative_imaginary_part": worst_imag,
    }))
}
