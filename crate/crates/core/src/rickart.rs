//! Annihilators, projection generators, the projection lattice and the
//! weakly-Rickart and Baer checks.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::element::projection_defect;
use crate::algebra::{Element, StarAlgebra};
use crate::instances::random_vector;
use crate::linalg::{column_space, column_space_scaled, kernel, span_residual, subspace_distance};
use crate::report::coeff_pairs;
use crate::spectral::{right_projection_vec, rp_residuals, spectral_parts};
use crate::structure::radical_basis;
use crate::{CMatrix, CVector, CheckReport, Error, Result, C64};

/// Slack for residuals of kernel-based constructions.
pub const KAPPA: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct AnnihilatorResult {
    pub side: Side,
    pub subspace_basis: Vec<Element>,
    /// `f` with `ann = fA` (right) or `ann = Af` (left).
    pub generator: Option<Element>,
    pub is_principal_projection_ideal: bool,
}

fn left_projection_vec(alg: &StarAlgebra, x: &CVector, tol: f64) -> CVector {
    right_projection_vec(alg, &alg.star_vec(x), tol)
}

/// Orthonormal basis of `{y : s y = 0 ∀ s}`.
pub(crate) fn right_annihilator_basis(alg: &StarAlgebra, s: &[CVector], tol: f64) -> CMatrix {
    let n = alg.dim();
    let mut stacked = CMatrix::zeros(n * s.len(), n);
    for (k, x) in s.iter().enumerate() {
        stacked.view_mut((k * n, 0), (n, n)).copy_from(&alg.left_mul_matrix(x));
    }
    kernel(&stacked, tol)
}

/// `e − ef`, or `None` when it is rounding noise (`e ≤ f`).
fn defect_part(alg: &StarAlgebra, e: &CVector, f: &CVector, tol: f64) -> Option<CVector> {
    let d = e - alg.mul_vec(e, f);
    (d.norm() > tol * e.norm().max(f.norm()).max(1.0)).then_some(d)
}

/// `e ∨ f = f + RP(e − ef)`.
pub(crate) fn join_vec(alg: &StarAlgebra, e: &CVector, f: &CVector, tol: f64) -> CVector {
    match defect_part(alg, e, f, tol) {
        Some(d) => f + right_projection_vec(alg, &d, tol),
        None => f.clone(),
    }
}

/// `e ∧ f = e − LP(e − ef)`.
pub(crate) fn meet_vec(alg: &StarAlgebra, e: &CVector, f: &CVector, tol: f64) -> CVector {
    match defect_part(alg, e, f, tol) {
        Some(d) => e - left_projection_vec(alg, &d, tol),
        None => e.clone(),
    }
}

/// Distance between `fA` and the span of the orthonormal columns of `q`.
fn generated_distance(alg: &StarAlgebra, f: &CVector, q: &CMatrix, tol: f64) -> f64 {
    let qf = range(alg, f, tol);
    if qf.ncols() != q.ncols() {
        return f64::INFINITY;
    }
    subspace_distance(&qf, q)
}

/// A projection `f` with `fA = I` for the right ideal spanned by the columns
/// of `ideal`, or `None` when there is none.
pub(crate) fn projection_generator_vec(
    alg: &StarAlgebra,
    ideal: &CMatrix,
    tol: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Option<CVector>> {
    let n = alg.dim();
    let q = column_space(ideal, tol);
    let mut images = CMatrix::zeros(n, q.ncols() * n);
    for c in 0..q.ncols() {
        let lx = alg.left_mul_matrix(&q.column(c).into_owned());
        images.columns_mut(c * n, n).copy_from(&lx);
    }
    let residual = span_residual(&q, &images);
    if residual > KAPPA * tol {
        return Err(Error::NotRightIdeal { residual });
    }
    Ok(generator_of_ideal(alg, &q, tol, rng).map(|(f, _)| f))
}

/// Generator for the right ideal with orthonormal basis `q`, which is assumed
/// to be a right ideal, with its certified residual.
///
/// `LP` of a random element of `I` is tried first; the fallback is the
/// iterated join of `LP(x)` over the basis of `I`.
fn generator_of_ideal(alg: &StarAlgebra, q: &CMatrix, tol: f64, rng: &mut ChaCha8Rng) -> Option<(CVector, f64)> {
    let n = alg.dim();
    if q.ncols() == 0 {
        return Some((CVector::zeros(n), 0.0));
    }
    let limit = KAPPA * tol;
    let certify = |f: &CVector| {
        let d = projection_defect(alg, f).max(generated_distance(alg, f, q, tol));
        (d <= limit).then_some(d)
    };
    // LP of a random element fails only when it is badly conditioned
    for _ in 0..3 {
        let x = q * random_vector(q.ncols(), rng);
        let f = left_projection_vec(alg, &x, tol);
        if let Some(d) = certify(&f) {
            return Some((f, d));
        }
    }
    let mut f = CVector::zeros(n);
    for c in 0..q.ncols() {
        let e = left_projection_vec(alg, &q.column(c).into_owned(), tol);
        f = join_vec(alg, &e, &f, tol);
    }
    certify(&f).map(|d| (f, d))
}

/// Projection generating the right ideal spanned by `ideal`.
pub fn projection_generator(ideal: &[Element], tol: f64, seed: u64) -> Result<Option<Element>> {
    let Some(first) = ideal.first() else {
        return Err(Error::Degenerate("empty ideal basis".into()));
    };
    let alg = first.algebra();
    if ideal.iter().any(|x| !x.same_parent(first)) {
        return Err(Error::ParentMismatch);
    }
    let cols: Vec<CVector> = ideal.iter().map(|x| x.coeffs().clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = projection_generator_vec(alg, &CMatrix::from_columns(&cols), tol, &mut rng)?;
    Ok(f.map(|f| Element::from_vec(alg, f)))
}

/// Right annihilator `{y : sy = 0}` or left annihilator `{y : ys = 0}` of `s`.
pub fn annihilator(s: &[Element], side: Side, tol: f64) -> Result<AnnihilatorResult> {
    let Some(first) = s.first() else {
        return Err(Error::Degenerate("annihilator of an empty set".into()));
    };
    if s.iter().any(|x| !x.same_parent(first)) {
        return Err(Error::ParentMismatch);
    }
    let alg = first.algebra();
    // ann_l(S) = ann_r(S*)*
    let vecs: Vec<CVector> = match side {
        Side::Right => s.iter().map(|x| x.coeffs().clone()).collect(),
        Side::Left => s.iter().map(|x| alg.star_vec(x.coeffs())).collect(),
    };
    let basis = right_annihilator_basis(alg, &vecs, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let generator = projection_generator_vec(alg, &basis, tol, &mut rng)?;
    let subspace_basis = (0..basis.ncols())
        .map(|c| {
            let y = basis.column(c).into_owned();
            let y = if side == Side::Left { alg.star_vec(&y) } else { y };
            Element::from_vec(alg, y)
        })
        .collect();
    Ok(AnnihilatorResult {
        side,
        subspace_basis,
        is_principal_projection_ideal: generator.is_some(),
        generator: generator.map(|f| Element::from_vec(alg, f)),
    })
}

/// `p ≤ q` iff `pq = p = qp`.
pub fn leq(p: &Element, q: &Element, tol: f64) -> bool {
    let pq = p * q;
    let qp = q * p;
    let s = tol * p.norm().max(1.0);
    (&pq - p).norm() <= s && (&qp - p).norm() <= s
}

fn certify_projection(p: &Element, tol: f64) -> Result<()> {
    let d = p.projection_defect();
    if d > KAPPA * tol {
        return Err(Error::Certification { what: "projection input", residual: d });
    }
    Ok(())
}

/// `pA` for a projection `p`; singular values are judged against `1`.
fn range(alg: &StarAlgebra, p: &CVector, tol: f64) -> CMatrix {
    column_space_scaled(&alg.left_mul_matrix(p), tol, 1.0)
}

/// Least upper bound of two projections.
pub fn join(e: &Element, f: &Element, tol: f64) -> Result<Element> {
    if !e.same_parent(f) {
        return Err(Error::ParentMismatch);
    }
    certify_projection(e, tol)?;
    certify_projection(f, tol)?;
    let alg = e.algebra();
    let j = join_vec(alg, e.coeffs(), f.coeffs(), tol);
    let mut residual = projection_defect(alg, &j);
    let je = Element::from_vec(alg, j.clone());
    if !leq(e, &je, KAPPA * tol) || !leq(f, &je, KAPPA * tol) {
        residual = f64::INFINITY;
    }
    // jA = eA + fA
    let mut both = CMatrix::zeros(alg.dim(), 2 * alg.dim());
    both.columns_mut(0, alg.dim()).copy_from(&alg.left_mul_matrix(e.coeffs()));
    both.columns_mut(alg.dim(), alg.dim()).copy_from(&alg.left_mul_matrix(f.coeffs()));
    let sum = column_space_scaled(&both, tol, 1.0);
    residual = residual.max(subspace_distance(&range(alg, &j, tol), &sum));
    if residual > KAPPA * tol {
        return Err(Error::Certification { what: "join", residual });
    }
    Ok(je)
}

/// Greatest lower bound of two projections.
pub fn meet(e: &Element, f: &Element, tol: f64) -> Result<Element> {
    if !e.same_parent(f) {
        return Err(Error::ParentMismatch);
    }
    certify_projection(e, tol)?;
    certify_projection(f, tol)?;
    let alg = e.algebra();
    let m = meet_vec(alg, e.coeffs(), f.coeffs(), tol);
    let mut residual = projection_defect(alg, &m);
    let me = Element::from_vec(alg, m.clone());
    if !leq(&me, e, KAPPA * tol) || !leq(&me, f, KAPPA * tol) {
        residual = f64::INFINITY;
    }
    // mA = eA ∩ fA
    let qe = range(alg, e.coeffs(), tol);
    let qf = range(alg, f.coeffs(), tol);
    let inter = intersection(&qe, &qf, tol);
    residual = residual.max(subspace_distance(&range(alg, &m, tol), &inter));
    if residual > KAPPA * tol {
        return Err(Error::Certification { what: "meet", residual });
    }
    Ok(me)
}

/// Orthonormal basis of the intersection of two column spans.
fn intersection(qa: &CMatrix, qb: &CMatrix, tol: f64) -> CMatrix {
    let n = qa.nrows();
    if qa.ncols() == 0 || qb.ncols() == 0 {
        return CMatrix::zeros(n, 0);
    }
    let mut m = CMatrix::zeros(n, qa.ncols() + qb.ncols());
    m.view_mut((0, 0), (n, qa.ncols())).copy_from(qa);
    m.view_mut((0, qa.ncols()), (n, qb.ncols())).copy_from(&(-qb));
    let k = kernel(&m, tol.sqrt());
    if k.ncols() == 0 {
        return CMatrix::zeros(n, 0);
    }
    column_space(&(qa * k.rows(0, qa.ncols())), tol)
}

/// A certified set of projections of one algebra with the lattice operations.
#[derive(Clone, Debug)]
pub struct ProjectionLattice {
    alg: Arc<StarAlgebra>,
    members: Vec<Element>,
    tol: f64,
}

impl ProjectionLattice {
    pub fn new(alg: &Arc<StarAlgebra>, tol: f64) -> Self {
        ProjectionLattice { alg: alg.clone(), members: Vec::new(), tol }
    }

    pub fn algebra(&self) -> &Arc<StarAlgebra> {
        &self.alg
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    /// Add a certified projection; returns its index.
    pub fn insert(&mut self, p: Element) -> Result<usize> {
        if !std::ptr::eq(p.algebra().as_ref(), self.alg.as_ref()) {
            return Err(Error::ParentMismatch);
        }
        certify_projection(&p, self.tol)?;
        self.members.push(p);
        Ok(self.members.len() - 1)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        leq(&self.members[i], &self.members[j], KAPPA * self.tol)
    }

    /// Join of members `i` and `j`, inserted into the lattice.
    pub fn join(&mut self, i: usize, j: usize) -> Result<usize> {
        let p = join(&self.members[i], &self.members[j], self.tol)?;
        self.insert(p)
    }

    pub fn meet(&mut self, i: usize, j: usize) -> Result<usize> {
        let p = meet(&self.members[i], &self.members[j], self.tol)?;
        self.insert(p)
    }
}

/// Greedily extend an orthogonal family of nonzero projections from spectral
/// projections of random selfadjoint elements compressed to the orthogonal
/// complement of the family so far. Stops after `rounds` failed attempts.
pub fn greedy_orthogonal_family(alg: &Arc<StarAlgebra>, tol: f64, seed: u64, rounds: usize) -> Vec<Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut family: Vec<CVector> = Vec::new();
    let mut total = CVector::zeros(alg.dim());
    let Some(unit) = alg.hull().algebra().unit().cloned() else {
        return Vec::new();
    };
    let hull = alg.hull();
    let mut misses = 0;
    while misses < rounds {
        // rest = 1 − Σ p in the hull; candidates are spectral projections of rest·b·rest
        let rest_h = &unit - hull.lift(&total);
        let b = random_vector(alg.dim(), &mut rng);
        let b = hull.lift(&((&b + alg.star_vec(&b)) * C64::from(0.5)));
        let h = hull.algebra();
        let c = hull.lower(&h.mul_vec(&h.mul_vec(&rest_h, &b), &rest_h));
        let parts = spectral_parts(alg, &c, tol);
        let mut added = false;
        for (_, p) in parts {
            let orth = family.iter().all(|q| alg.mul_vec(&p, q).norm() <= KAPPA * tol);
            if p.norm() > tol.sqrt() && projection_defect(alg, &p) <= KAPPA * tol && orth {
                total += &p;
                family.push(p);
                added = true;
            }
        }
        if added {
            misses = 0;
        } else {
            misses += 1;
        }
    }
    family.into_iter().map(|p| Element::from_vec(alg, p)).collect()
}

fn sample_elements(alg: &StarAlgebra, samples: usize, tol: f64, rng: &mut ChaCha8Rng) -> Vec<CVector> {
    let n = alg.dim();
    let mut out: Vec<CVector> = (0..n).map(|i| alg.basis_vector(i)).collect();
    for _ in 0..samples {
        out.push(random_vector(n, rng));
    }
    let mut idem = Vec::new();
    for _ in 0..2 {
        let b = random_vector(n, rng);
        let b = (&b + alg.star_vec(&b)) * C64::from(0.5);
        idem.extend(spectral_parts(alg, &b, tol).into_iter().map(|(_, p)| p));
    }
    for (i, p) in idem.iter().enumerate() {
        for q in &idem[i + 1..] {
            out.push(alg.mul_vec(p, q));
        }
    }
    out.extend(idem);
    let rad = radical_basis(alg, tol);
    out.extend((0..rad.ncols()).map(|c| rad.column(c).into_owned()));
    out
}

/// Construct `RP(a)` for the basis, `samples` random elements, spectral
/// idempotents of random elements and their products, and a radical basis,
/// and verify `a·RP(a) = a` and `ay = 0 ⇒ RP(a)y = 0`.
pub fn check_weakly_rickart(alg: &StarAlgebra, samples: usize, tol: f64, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut witness = None;
    let mut checked = 0usize;
    for a in sample_elements(alg, samples, tol, &mut rng) {
        let an = a.norm();
        if an <= tol {
            continue;
        }
        let a = &a / C64::from(an);
        checked += 1;
        let e = right_projection_vec(alg, &a, tol);
        let r = rp_residuals(alg, &a, &e, tol);
        let w = r.worst();
        if !r.passes(tol) {
            if witness.is_none() {
                witness = Some(json!({
                    "element": coeff_pairs(&a),
                    "rp_candidate": coeff_pairs(&e),
                    "residuals": r,
                }));
            }
            worst = worst.max(if w.is_finite() { w.max(tol * 2.0) } else { w });
        } else {
            worst = worst.max(w);
        }
    }
    let pass = witness.is_none();
    let w = witness.unwrap_or_else(|| json!({ "elements_checked": checked }));
    CheckReport::new("weakly_rickart", pass, worst, seed).with_witness(w)
}

/// Sizes of the direct Baer witness family.
#[derive(Clone, Debug)]
pub struct BaerOptions {
    /// Low-rank elements whose pairs are tested.
    pub pair_sample: usize,
    /// Random subsets of size at most `dim`.
    pub random_subsets: usize,
}

impl Default for BaerOptions {
    fn default() -> Self {
        BaerOptions { pair_sample: 32, random_subsets: 8 }
    }
}

/// Unital, weakly Rickart, and every sampled right annihilator is generated
/// by a projection.
pub fn check_baer(alg: &StarAlgebra, tol: f64, seed: u64) -> CheckReport {
    check_baer_with(alg, tol, seed, &BaerOptions::default())
}

pub fn check_baer_with(alg: &StarAlgebra, tol: f64, seed: u64, opts: &BaerOptions) -> CheckReport {
    let wr = check_weakly_rickart(alg, 16, tol, seed);
    check_baer_given(alg, wr.pass, tol, seed, opts)
}

pub(crate) fn check_baer_given(
    alg: &StarAlgebra,
    weakly_rickart: bool,
    tol: f64,
    seed: u64,
    opts: &BaerOptions,
) -> CheckReport {
    if !alg.is_unital() {
        return CheckReport::new("baer", false, f64::INFINITY, seed).with_witness(json!({"reason": "not unital"}));
    }
    if !weakly_rickart {
        return CheckReport::new("baer", false, f64::INFINITY, seed)
            .with_witness(json!({"reason": "not weakly Rickart"}));
    }
    let n = alg.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xBAE);
    let mut subsets: Vec<Vec<CVector>> = (0..n).map(|i| vec![alg.basis_vector(i)]).collect();
    let mut low_rank = Vec::with_capacity(opts.pair_sample);
    while low_rank.len() < opts.pair_sample {
        let b = random_vector(n, &mut rng);
        let b = (&b + alg.star_vec(&b)) * C64::from(0.5);
        let parts = spectral_parts(alg, &b, tol);
        if parts.is_empty() {
            low_rank.push(random_vector(n, &mut rng));
            continue;
        }
        let p = &parts[rng.random_range(0..parts.len())].1;
        low_rank.push(alg.mul_vec(&random_vector(n, &mut rng), p));
    }
    for i in 0..low_rank.len() {
        for j in i + 1..low_rank.len() {
            subsets.push(vec![low_rank[i].clone(), low_rank[j].clone()]);
        }
    }
    for _ in 0..opts.random_subsets {
        let k = rng.random_range(1..=n);
        let pool: Vec<CVector> = low_rank.iter().cloned().chain((0..n).map(|i| alg.basis_vector(i))).collect();
        let idx = sample(&mut rng, pool.len(), k.min(pool.len()));
        subsets.push(idx.iter().map(|i| pool[i].clone()).collect());
    }
    let mut worst: f64 = 0.0;
    for s in &subsets {
        let basis = right_annihilator_basis(alg, s, tol);
        match generator_of_ideal(alg, &basis, tol, &mut rng) {
            Some((_, d)) => worst = worst.max(d),
            None => {
                let pairs: Vec<Vec<[f64; 2]>> = s.iter().map(coeff_pairs).collect();
                return CheckReport::new("baer", false, f64::INFINITY, seed)
                    .with_witness(json!({"subset": pairs, "annihilator_dim": basis.ncols()}));
            }
        }
    }
    CheckReport::new("baer", true, worst, seed).with_witness(json!({"subsets_checked": subsets.len()}))
}
