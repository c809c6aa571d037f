//! Center, central atoms, sub-algebra extraction and the Abelian split.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::element::projection_defect;
use crate::algebra::{Element, StarAlgebra};
use crate::linalg::{column_space_scaled, kernel_scaled, span_residual};
use crate::spectral::spectral_parts;
use crate::{CMatrix, CVector, Error, Result, C64};

/// Orthonormal basis (columns) of the center `{z : z e_i = e_i z ∀i}`.
pub(crate) fn center_basis(alg: &StarAlgebra, tol: f64) -> CMatrix {
    let n = alg.dim();
    let left = alg.left_matrices();
    let mut stacked = CMatrix::zeros(n * n, n);
    for i in 0..n {
        // z ↦ e_i z − z e_i; column j of the right part is e_j e_i
        let mut block = left[i].clone();
        for j in 0..n {
            let col = left[j].column(i).into_owned();
            let mut c = block.column_mut(j);
            c -= col;
        }
        stacked.view_mut((i * n, 0), (n, n)).copy_from(&block);
    }
    // for a commutative algebra the system is rounding noise
    let scale = left.iter().map(|l| l.norm()).fold(0.0, f64::max);
    kernel_scaled(&stacked, tol, scale)
}

pub fn center(alg: &Arc<StarAlgebra>, tol: f64) -> Vec<Element> {
    let b = center_basis(alg, tol);
    (0..b.ncols())
        .map(|c| Element::from_vec(alg, b.column(c).into_owned()))
        .collect()
}

/// Rank of the columns `f(q_c)` relative to the largest.
fn image_rank(vectors: &[CVector], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    column_space_scaled(&CMatrix::from_columns(vectors), tol, 1.0).ncols()
}

/// `dim(pA)` for a projection `p`.
pub(crate) fn right_ideal_dim(alg: &StarAlgebra, p: &CVector, tol: f64) -> usize {
    column_space_scaled(&alg.left_mul_matrix(p), tol, 1.0).ncols()
}

/// The central projections `z_1, …, z_m` with `Σ z_i = 1`, each minimal
/// among central projections, and the block dimensions `dim(z_i A)`.
#[derive(Clone, Debug)]
pub struct CentralDecomposition {
    pub atoms: Vec<Element>,
    pub block_dims: Vec<usize>,
    /// Worst of the sum, orthogonality, projection and centrality defects.
    pub residual: f64,
}

fn is_central_atom(alg: &StarAlgebra, zb: &CMatrix, z: &CVector, tol: f64) -> bool {
    let prods: Vec<CVector> = (0..zb.ncols())
        .map(|c| alg.mul_vec(z, &zb.column(c).into_owned()))
        .collect();
    image_rank(&prods, tol) <= 1
}

fn random_central_selfadjoint<R: Rng>(alg: &StarAlgebra, zb: &CMatrix, rng: &mut R) -> CVector {
    let mut c = CVector::zeros(alg.dim());
    for k in 0..zb.ncols() {
        // selfadjoint parts of v and iv span the selfadjoint center over ℝ
        let v = zb.column(k).into_owned();
        let re = (&v + alg.star_vec(&v)) * C64::from(0.5);
        let im = (&v - alg.star_vec(&v)) * C64::new(0.0, 0.5);
        c += re * C64::from(rng.random_range(-1.0..1.0)) + im * C64::from(rng.random_range(-1.0..1.0));
    }
    c
}

/// Split `z` by the spectral projections of `z c` for a random selfadjoint
/// central `c`, keeping the remainder `z − Σ`.
fn split_projection(alg: &StarAlgebra, z: &CVector, c: &CVector, tol: f64) -> Vec<CVector> {
    let zc = alg.mul_vec(z, c);
    let parts = spectral_parts(alg, &zc, tol);
    let mut rest = z.clone();
    let mut out = Vec::new();
    for (_, p) in parts {
        rest -= &p;
        out.push(p);
    }
    if rest.norm() > tol.sqrt() * z.norm().max(1.0) {
        out.push(rest);
    }
    out
}

/// Minimal central projections, found by refining `1` along spectral
/// projections of random selfadjoint central elements.
/// Requires a unital semisimple algebra with proper involution.
pub fn central_atoms(alg: &Arc<StarAlgebra>, tol: f64, seed: u64) -> Result<CentralDecomposition> {
    let unit = alg.unit().ok_or(Error::NotUnital)?.clone();
    let zb = center_basis(alg, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut atoms = vec![unit.clone()];
    for _ in 0..=alg.dim() {
        if atoms.iter().all(|z| is_central_atom(alg, &zb, z, tol)) {
            break;
        }
        let mut next = Vec::new();
        for z in atoms {
            if is_central_atom(alg, &zb, &z, tol) {
                next.push(z);
            } else {
                let c = random_central_selfadjoint(alg, &zb, &mut rng);
                next.extend(split_projection(alg, &z, &c, tol));
            }
        }
        atoms = next;
    }
    if !atoms.iter().all(|z| is_central_atom(alg, &zb, z, tol)) || atoms.len() > zb.ncols() {
        return Err(Error::DegenerateRandomness);
    }
    let mut block_dims: Vec<usize> = atoms.iter().map(|z| right_ideal_dim(alg, z, tol)).collect();
    // deterministic order: smaller blocks first, ties by coefficient pattern
    let mut order: Vec<usize> = (0..atoms.len()).collect();
    order.sort_by(|&a, &b| {
        block_dims[a].cmp(&block_dims[b]).then_with(|| {
            let ka: Vec<f64> = atoms[a].iter().map(|z| z.re).collect();
            let kb: Vec<f64> = atoms[b].iter().map(|z| z.re).collect();
            kb.partial_cmp(&ka).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    let atoms: Vec<CVector> = order.iter().map(|&i| atoms[i].clone()).collect();
    block_dims = order.iter().map(|&i| block_dims[i]).collect();

    let mut residual: f64 = 0.0;
    let mut sum = CVector::zeros(alg.dim());
    for (i, z) in atoms.iter().enumerate() {
        sum += z;
        residual = residual.max(projection_defect(alg, z));
        for w in &atoms[i + 1..] {
            residual = residual.max(alg.mul_vec(z, w).norm());
        }
        for k in 0..alg.dim() {
            let e = alg.basis_vector(k);
            residual = residual.max((alg.mul_vec(z, &e) - alg.mul_vec(&e, z)).norm());
        }
    }
    residual = residual.max((sum - &unit).norm());
    if residual > tol.sqrt() {
        return Err(Error::Certification { what: "central decomposition", residual });
    }
    Ok(CentralDecomposition {
        atoms: atoms.into_iter().map(|z| Element::from_vec(alg, z)).collect(),
        block_dims,
        residual,
    })
}

/// A *-subalgebra `B ⊂ A` in an orthonormal basis.
#[derive(Clone, Debug)]
pub struct SubAlgebra {
    pub algebra: Arc<StarAlgebra>,
    /// `A`-coordinates of the basis of `B`, as orthonormal columns.
    pub inclusion: CMatrix,
}

impl SubAlgebra {
    pub fn dim(&self) -> usize {
        self.inclusion.ncols()
    }

    pub fn include(&self, x: &CVector) -> CVector {
        &self.inclusion * x
    }

    pub fn restrict(&self, x: &CVector) -> CVector {
        self.inclusion.adjoint() * x
    }
}

/// The *-subalgebra spanned by the columns of `spanning`, or `None` when the
/// span is zero. Singular values of `spanning` below `tol · max(σ_max, 1)`
/// are dropped. Fails if the span is not closed under products and `*`.
pub fn extract_subalgebra(alg: &StarAlgebra, spanning: &CMatrix, tol: f64) -> Result<Option<SubAlgebra>> {
    let q = column_space_scaled(spanning, tol, 1.0);
    let m = q.ncols();
    if m == 0 {
        return Ok(None);
    }
    let cols: Vec<CVector> = (0..m).map(|i| q.column(i).into_owned()).collect();
    let mut left = vec![CMatrix::zeros(m, m); m];
    let mut star = CMatrix::zeros(m, m);
    let mut images = Vec::with_capacity(m * m + m);
    for i in 0..m {
        for j in 0..m {
            let p = alg.mul_vec(&cols[i], &cols[j]);
            left[i].set_column(j, &(q.adjoint() * &p));
            images.push(p);
        }
        let s = alg.star_vec(&cols[i]);
        star.set_column(i, &(q.adjoint() * &s));
        images.push(s);
    }
    let residual = span_residual(&q, &CMatrix::from_columns(&images));
    if residual > tol.sqrt() {
        return Err(Error::Certification { what: "subalgebra closure", residual });
    }
    let sub = StarAlgebra::new(left, star)?;
    Ok(Some(SubAlgebra { algebra: Arc::new(sub), inclusion: q }))
}

/// `A = hA ⊕ (1−h)A` with `hA` commutative and `(1−h)A` having no
/// commutative central summand.
#[derive(Clone, Debug)]
pub struct AbelianSplit {
    pub h: Element,
    pub commutative: Option<SubAlgebra>,
    pub non_abelian: Option<SubAlgebra>,
    pub atoms: CentralDecomposition,
}

fn is_commutative_block(alg: &StarAlgebra, z: &CVector, tol: f64) -> bool {
    let span = column_space_scaled(&alg.left_mul_matrix(z), tol, 1.0);
    let cols: Vec<CVector> = (0..span.ncols()).map(|i| span.column(i).into_owned()).collect();
    for (i, x) in cols.iter().enumerate() {
        for y in &cols[i + 1..] {
            if (alg.mul_vec(x, y) - alg.mul_vec(y, x)).norm() > tol.sqrt() {
                return false;
            }
        }
    }
    true
}

/// `h` is the sum of the central atoms whose blocks are commutative.
pub fn abelian_split(alg: &Arc<StarAlgebra>, tol: f64, seed: u64) -> Result<AbelianSplit> {
    let atoms = central_atoms(alg, tol, seed)?;
    let mut h = CVector::zeros(alg.dim());
    for z in &atoms.atoms {
        if is_commutative_block(alg, z.coeffs(), tol) {
            h += z.coeffs();
        }
    }
    let unit = alg.unit().ok_or(Error::NotUnital)?;
    let comp = unit - &h;
    let commutative = extract_subalgebra(alg, &alg.left_mul_matrix(&h), tol)?;
    let non_abelian = extract_subalgebra(alg, &alg.left_mul_matrix(&comp), tol)?;
    Ok(AbelianSplit { h: Element::from_vec(alg, h), commutative, non_abelian, atoms })
}
