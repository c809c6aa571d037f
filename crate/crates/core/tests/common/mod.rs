//! Instance generators and independent oracles shared by the integration tests.
//!
//! The oracles work block by block on `⊕ M_{n_k} ⊕ ℂ^m` in its matrix-unit
//! basis and use Hermitian eigendecompositions only, so they share no code
//! path with the Krylov/Riesz machinery of the library.

#![allow(dead_code)]

use std::sync::Arc;

use nalgebra::SymmetricEigen;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use staralg::{instances, CMatrix, CVector, Element, StarAlgebra, C64};

/// A generated instance together with what it is known to be by construction.
pub struct Instance {
    pub name: String,
    pub alg: Arc<StarAlgebra>,
    /// Block sizes in construction order, `n_k ≥ 1`.
    pub blocks: Vec<usize>,
    pub abelian: usize,
    pub proper: bool,
    /// Columns are the new basis in canonical coordinates (unitary), when known.
    pub basis: Option<CMatrix>,
}

impl Instance {
    pub fn canonical(blocks: &[usize], abelian: usize) -> Instance {
        Instance {
            name: format!("blocks{blocks:?}+{abelian}"),
            alg: Arc::new(instances::block_algebra(blocks, abelian)),
            blocks: blocks.to_vec(),
            abelian,
            proper: true,
            basis: None,
        }
    }

    pub fn rotated(blocks: &[usize], abelian: usize, rng: &mut ChaCha8Rng) -> Instance {
        let base = instances::block_algebra(blocks, abelian);
        let p = instances::random_unitary(base.dim(), rng);
        Instance {
            name: format!("rotated{blocks:?}+{abelian}"),
            alg: Arc::new(instances::change_basis(&base, &p)),
            blocks: blocks.to_vec(),
            abelian,
            proper: true,
            basis: Some(p),
        }
    }

    /// Canonical coordinates of `x`.
    pub fn to_canonical(&self, x: &CVector) -> CVector {
        match &self.basis {
            Some(p) => p * x,
            None => x.clone(),
        }
    }

    pub fn from_canonical(&self, x: &CVector) -> CVector {
        match &self.basis {
            Some(p) => p.adjoint() * x,
            None => x.clone(),
        }
    }

    pub fn nonabelian_blocks(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self.blocks.iter().copied().filter(|&n| n >= 2).collect();
        b.sort_unstable();
        b
    }

    pub fn abelian_dim(&self) -> usize {
        self.abelian + self.blocks.iter().filter(|&&n| n == 1).count()
    }
}

/// Block sizes in `1..=4` and an abelian part with `Σ n² + m ≤ max_dim`, `dim ≥ 1`.
pub fn random_shape(rng: &mut ChaCha8Rng, max_dim: usize) -> (Vec<usize>, usize) {
    loop {
        let mut blocks = Vec::new();
        let mut dim = 0;
        for _ in 0..rng.random_range(0..=3) {
            let n = rng.random_range(1..=4usize);
            if dim + n * n <= max_dim {
                blocks.push(n);
                dim += n * n;
            }
        }
        let abelian = rng.random_range(0..=(max_dim - dim).min(4));
        if dim + abelian > 0 {
            return (blocks, abelian);
        }
    }
}

/// Non-proper mutants with their descriptions: swap involutions and
/// nilpotent extensions, some glued to a proper summand, all rotated.
pub fn mutants(rng: &mut ChaCha8Rng) -> Vec<Instance> {
    let raw: Vec<(&str, StarAlgebra)> = vec![
        ("swap_c2", instances::swap_c2()),
        ("swap_m2", instances::swap_pair(2)),
        ("swap_m3", instances::swap_pair(3)),
        ("swap_c2+m2", instances::direct_sum(&[instances::swap_c2(), instances::matrix_algebra(2)])),
        ("swap_m2+c3", instances::direct_sum(&[instances::swap_pair(2), instances::diagonal_algebra(3)])),
        ("dual_c", instances::dual_numbers(1)),
        ("dual_m2", instances::dual_numbers(2)),
        ("dual_m3", instances::dual_numbers(3)),
        ("dual_c+m2", instances::direct_sum(&[instances::dual_numbers(1), instances::matrix_algebra(2)])),
        ("dual_m2+c2", instances::direct_sum(&[instances::dual_numbers(2), instances::diagonal_algebra(2)])),
        ("nilpotent_unitized", instances::nilpotent_line().unitize()),
        ("nilpotent+m2", instances::direct_sum(&[instances::nilpotent_line(), instances::matrix_algebra(2)])),
    ];
    raw.into_iter()
        .map(|(name, a)| {
            let p = instances::random_unitary(a.dim(), rng);
            Instance {
                name: name.to_string(),
                alg: Arc::new(instances::change_basis(&a, &p)),
                blocks: Vec::new(),
                abelian: 0,
                proper: false,
                basis: Some(p),
            }
        })
        .collect()
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `(offset, n)` of every block in canonical coordinates; abelian summands are `n = 1`.
fn layout(blocks: &[usize], abelian: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for &n in blocks.iter().chain(std::iter::repeat_n(&1, abelian)) {
        out.push((off, n));
        off += n * n;
    }
    out
}

fn block_matrix(x: &CVector, off: usize, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |p, q| x[off + p * n + q])
}

fn write_block(out: &mut CVector, m: &CMatrix, off: usize, n: usize) {
    for p in 0..n {
        for q in 0..n {
            out[off + p * n + q] = m[(p, q)];
        }
    }
}

/// Apply `f` to each block matrix of the canonical coordinates `x`.
pub fn blockwise(inst: &Instance, x: &CVector, f: impl Fn(&CMatrix) -> CMatrix) -> CVector {
    let xc = inst.to_canonical(x);
    let mut out = CVector::zeros(xc.len());
    for (off, n) in layout(&inst.blocks, inst.abelian) {
        let m = f(&block_matrix(&xc, off, n));
        write_block(&mut out, &m, off, n);
    }
    inst.from_canonical(&out)
}

/// `Σ g(λ) v vᴴ` over the eigenpairs of the Hermitian `h`.
pub fn hermitian_function(h: &CMatrix, g: impl Fn(f64) -> f64) -> CMatrix {
    let hh = (h + h.adjoint()) * c(0.5);
    let e = SymmetricEigen::new(hh);
    let n = h.nrows();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        let v = e.eigenvectors.column(i);
        out += v * v.adjoint() * c(g(e.eigenvalues[i]));
    }
    out
}

/// Orthogonal projection onto the support of `AᴴA`, for an `A` that is a
/// block of an element of norm `scale`.
///
/// The cut is absolute because a block may hold only rounding noise, and it
/// sits at `σ = 1e-6·scale` because eigenvalues of `AᴴA` carry an absolute
/// error near `ε·scale²`.
pub fn oracle_rp(a: &CMatrix, scale: f64) -> CMatrix {
    let cut = 1e-12 * scale * scale;
    hermitian_function(&(a.adjoint() * a), |l| if l > cut { 1.0 } else { 0.0 })
}

/// Moore–Penrose inverse `(AᴴA)⁺ Aᴴ` with the cut of [`oracle_rp`].
pub fn oracle_pinv(a: &CMatrix, scale: f64) -> CMatrix {
    let cut = 1e-12 * scale * scale;
    hermitian_function(&(a.adjoint() * a), |l| if l > cut { 1.0 / l } else { 0.0 }) * a.adjoint()
}

/// Positive square root of a positive semidefinite matrix.
pub fn oracle_sqrt(x: &CMatrix) -> CMatrix {
    hermitian_function(x, |l| l.max(0.0).sqrt())
}

/// Numerical rank from the eigenvalues of `mᴴm`.
pub fn rank(m: &CMatrix, tol: f64) -> usize {
    let ev = SymmetricEigen::new(m.adjoint() * m).eigenvalues;
    let smax = ev.iter().copied().fold(0.0, f64::max).sqrt();
    ev.iter().filter(|&&l| l.max(0.0).sqrt() > tol * smax.max(1.0)).count()
}

pub fn hcat(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

pub fn element(alg: &Arc<StarAlgebra>, v: CVector) -> Element {
    Element::new(alg, v).expect("dimension matches")
}

/// Relative size of `x − y` against `max(1, ‖y‖)`.
pub fn rel(x: &Element, y: &Element) -> f64 {
    (x - y).norm() / y.norm().max(1.0)
}

/// A random element of the right ideal `p A`, typically of low rank, where
/// `p` projects onto the positive eigenspaces of a random selfadjoint element
/// (onto the others when there are none).
pub fn low_rank<R: Rng>(inst: &Instance, rng: &mut R) -> Element {
    let b = instances::random_selfadjoint(&inst.alg, rng);
    let mut p = blockwise(inst, b.coeffs(), |m| hermitian_function(m, |l| if l > 0.0 { 1.0 } else { 0.0 }));
    if p.norm() < 0.5 {
        p = blockwise(inst, b.coeffs(), |m| hermitian_function(m, |l| if l > 0.0 { 0.0 } else { 1.0 }));
    }
    let a = instances::random_element(&inst.alg, rng);
    &a * &element(&inst.alg, p)
}
