//! Dense complex linear algebra helpers shared by the algebra modules.

use nalgebra::{Schur, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instances::random_unitary;

use crate::{CMatrix, CVector, C64};

pub(crate) fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub(crate) fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Singular values (descending) and the full set of right singular vectors
/// (columns of `v`, matching the order of `sigma`, padded to `ncols`).
///
/// Computed with faer: the nalgebra SVD (real and complex) loses several
/// digits on clustered singular values.
pub(crate) struct RightSvd {
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

pub(crate) fn right_svd(m: &CMatrix) -> RightSvd {
    let (r, n) = m.shape();
    if n == 0 {
        return RightSvd {
            sigma: Vec::new(),
            v: CMatrix::zeros(0, 0),
        };
    }
    let rows = r.max(n);
    let f = faer::Mat::<faer::c64>::from_fn(rows, n, |i, j| {
        if i < r {
            let z = m[(i, j)];
            faer::c64::new(z.re, z.im)
        } else {
            faer::c64::new(0.0, 0.0)
        }
    });
    let svd = f.thin_svd().expect("svd converges");
    let s = svd.S().column_vector();
    let fv = svd.V();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[b].re.total_cmp(&s[a].re));
    let sigma = order.iter().map(|&i| s[i].re).collect();
    let v = CMatrix::from_fn(n, n, |k, c| {
        let z = fv[(k, order[c])];
        C64::new(z.re, z.im)
    });
    RightSvd { sigma, v }
}

impl RightSvd {
    /// The columns of `v` for `sigma[from..to]`.
    pub fn span(&self, from: usize, to: usize) -> CMatrix {
        self.v.columns(from, to.saturating_sub(from)).into_owned()
    }
}

/// Largest singular value.
pub(crate) fn spectral_norm(m: &CMatrix) -> f64 {
    right_svd(m).sigma.first().copied().unwrap_or(0.0)
}

/// Minimum-norm least-squares solution of `m x = b`, dropping singular values
/// below `tol · σ_max`, with one step of refinement.
pub(crate) fn least_squares(m: &CMatrix, b: &CVector, tol: f64) -> CVector {
    let svd = right_svd(m);
    let n = m.ncols();
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return CVector::zeros(n);
    }
    let k = svd.sigma.iter().take_while(|&&s| s > tol * smax).count();
    let v = svd.v.columns(0, k);
    let solve = |r: &CVector| {
        let mut y = v.adjoint() * (m.adjoint() * r);
        for i in 0..k {
            y[i] /= C64::from(svd.sigma[i] * svd.sigma[i]);
        }
        v * y
    };
    let x = solve(b);
    let r = b - m * &x;
    x + solve(&r)
}

/// Orthonormal basis of the null space of `m`; singular values at or below
/// `tol * sigma_max` count as zero.
pub(crate) fn kernel(m: &CMatrix, tol: f64) -> CMatrix {
    kernel_scaled(m, tol, 0.0)
}

/// Null space with singular values at or below `tol · max(σ_max, scale)` counting as zero.
pub(crate) fn kernel_scaled(m: &CMatrix, tol: f64, scale: f64) -> CMatrix {
    let n = m.ncols();
    let svd = right_svd(m);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let k = if smax == 0.0 {
        0
    } else {
        svd.sigma.iter().take_while(|&&s| s > tol * smax.max(scale)).count()
    };
    svd.span(k, n)
}

/// Ratio of largest to smallest singular value above the rank threshold.
pub(crate) fn condition_number(m: &CMatrix, tol: f64) -> f64 {
    let svd = right_svd(m);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 1.0;
    }
    let smin = svd
        .sigma
        .iter()
        .copied()
        .filter(|&s| s > tol * smax)
        .fold(f64::INFINITY, f64::min);
    smax / smin
}

/// Orthonormal basis of the column space of `m`.
pub(crate) fn column_space(m: &CMatrix, tol: f64) -> CMatrix {
    column_space_scaled(m, tol, 0.0)
}

/// Column space keeping singular values above `tol · max(σ_max, scale)`, so
/// that a matrix of rounding noise has rank zero when `scale` is its natural size.
pub(crate) fn column_space_scaled(m: &CMatrix, tol: f64, scale: f64) -> CMatrix {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return CMatrix::zeros(r, 0);
    }
    // left singular vectors of m are right singular vectors of m*
    let svd = right_svd(&m.adjoint());
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return CMatrix::zeros(r, 0);
    }
    let thresh = tol * smax.max(scale);
    let k = svd.sigma.iter().take_while(|&&s| s > thresh).count();
    svd.span(0, k)
}

/// Orthonormal basis of the orthogonal complement of the (orthonormal) columns of `q`.
pub(crate) fn orthogonal_complement(q: &CMatrix, tol: f64) -> CMatrix {
    let n = q.nrows();
    if q.ncols() == 0 {
        return CMatrix::identity(n, n);
    }
    kernel(&q.adjoint(), tol)
}

/// Largest residual of projecting either orthonormal basis onto the span of the other.
pub(crate) fn subspace_distance(q1: &CMatrix, q2: &CMatrix) -> f64 {
    let n = q1.nrows();
    let proj = |q: &CMatrix| {
        if q.ncols() == 0 {
            CMatrix::zeros(n, n)
        } else {
            q * q.adjoint()
        }
    };
    let p1 = proj(q1);
    let p2 = proj(q2);
    let r1 = if q2.ncols() == 0 { 0.0 } else { (q2 - &p1 * q2).norm() };
    let r2 = if q1.ncols() == 0 { 0.0 } else { (q1 - &p2 * q1).norm() };
    r1.max(r2)
}

/// Largest residual of projecting the columns of `x` onto the span of the
/// orthonormal columns of `q`, relative to the largest column of `x`.
pub(crate) fn span_residual(q: &CMatrix, x: &CMatrix) -> f64 {
    let scale = (0..x.ncols()).map(|c| x.column(c).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for c in 0..x.ncols() {
        let col = x.column(c).into_owned();
        let r = if q.ncols() == 0 {
            col.norm()
        } else {
            (&col - q * (q.adjoint() * &col)).norm()
        };
        worst = worst.max(r);
    }
    worst / scale
}

/// Result of an Arnoldi run: orthonormal Krylov basis and the square
/// Hessenberg compression `q^H op q`.
pub(crate) struct Arnoldi {
    pub q: CMatrix,
    pub h: CMatrix,
}

/// Arnoldi iteration with full reorthogonalisation. Stops when the next
/// Krylov direction is within `tol * ‖op‖` of the current span.
pub(crate) fn arnoldi(op: &CMatrix, start: &CVector, tol: f64) -> Arnoldi {
    let n = op.nrows();
    let scale = op.norm().max(f64::MIN_POSITIVE);
    let mut basis: Vec<CVector> = vec![start / C64::from(start.norm())];
    let mut hcols: Vec<Vec<C64>> = Vec::new();
    loop {
        let k = basis.len();
        let mut w = op * &basis[k - 1];
        let mut col = vec![zero(); k + 1];
        for _ in 0..2 {
            for (i, qi) in basis.iter().enumerate() {
                let c = qi.dotc(&w);
                col[i] += c;
                w -= qi * c;
            }
        }
        let beta = w.norm();
        col[k] = C64::from(beta);
        hcols.push(col);
        if beta <= tol * scale || k == n {
            break;
        }
        basis.push(w / C64::from(beta));
    }
    let d = basis.len();
    let mut q = CMatrix::zeros(n, d);
    for (i, b) in basis.iter().enumerate() {
        q.set_column(i, b);
    }
    let mut h = CMatrix::zeros(d, d);
    for (j, col) in hcols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            if i < d {
                h[(i, j)] = *v;
            }
        }
    }
    Arnoldi { q, h }
}

/// Complex Schur form `m = z t z^H` with `t` upper triangular.
///
/// The QR iteration deflates on a test relative to the diagonal, which stalls
/// on clusters of eigenvalues near zero, so it runs on `m + σ` with `|σ|`
/// larger than the spectral radius. Every attempt is capped; later attempts
/// rotate `σ` and conjugate `m` by a fixed random unitary. `None` when none
/// converges.
pub(crate) fn schur(m: &CMatrix) -> Option<(CMatrix, CMatrix)> {
    let n = m.nrows();
    let radius = 2.0 * m.norm().max(f64::MIN_POSITIVE);
    for attempt in 0..6u64 {
        let shift = C64::from_polar(radius, 0.9 * attempt as f64);
        let w = if attempt < 2 {
            CMatrix::identity(n, n)
        } else {
            random_unitary(n, &mut ChaCha8Rng::seed_from_u64(attempt))
        };
        let a = w.adjoint() * m * &w + CMatrix::identity(n, n) * shift;
        let Some(s) = Schur::try_new(a, f64::EPSILON, 200 * n.max(1)) else {
            continue;
        };
        let (z, mut t) = s.unpack();
        for j in 0..n {
            t[(j, j)] -= shift;
            for i in (j + 1)..n {
                t[(i, j)] = zero();
            }
        }
        return Some((w * z, t));
    }
    None
}

/// Group values into clusters: single linkage with threshold
/// `tol * max(1, |a|, |b|)`.
pub(crate) fn cluster(values: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut c = i;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let thresh = tol * 1f64.max(values[i].norm()).max(values[j].norm());
            if (values[i] - values[j]).norm() <= thresh {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_index: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_index[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_index[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

pub(crate) fn cluster_mean(values: &[C64], members: &[usize]) -> C64 {
    let s: C64 = members.iter().map(|&i| values[i]).sum();
    s / members.len() as f64
}

/// Swap the adjacent diagonal entries `k`, `k+1` of the triangular `t`,
/// updating the unitary `z` so that `z t z^H` is unchanged.
fn swap_adjacent(z: &mut CMatrix, t: &mut CMatrix, k: usize) {
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    let t12 = t[(k, k + 1)];
    let mut v1 = t12;
    let mut v2 = t22 - t11;
    let nrm = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
    if nrm == 0.0 {
        return;
    }
    v1 /= nrm;
    v2 /= nrm;
    // columns of u: eigenvector for t22, then its orthogonal complement
    let u = [[v1, -v2.conj()], [v2, v1.conj()]];
    let n = t.nrows();
    for i in 0..n {
        let a = t[(i, k)];
        let b = t[(i, k + 1)];
        t[(i, k)] = a * u[0][0] + b * u[1][0];
        t[(i, k + 1)] = a * u[0][1] + b * u[1][1];
        let a = z[(i, k)];
        let b = z[(i, k + 1)];
        z[(i, k)] = a * u[0][0] + b * u[1][0];
        z[(i, k + 1)] = a * u[0][1] + b * u[1][1];
    }
    for j in 0..n {
        let a = t[(k, j)];
        let b = t[(k + 1, j)];
        t[(k, j)] = u[0][0].conj() * a + u[1][0].conj() * b;
        t[(k + 1, j)] = u[0][1].conj() * a + u[1][1].conj() * b;
    }
    t[(k + 1, k)] = zero();
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
}

/// Spectral (Riesz) projector of `z t z^H` onto the generalised eigenspace
/// of the diagonal entries listed in `members`, along the remaining ones.
pub(crate) fn riesz_projector(z: &CMatrix, t: &CMatrix, members: &[usize]) -> CMatrix {
    let n = t.nrows();
    let mut z = z.clone();
    let mut t = t.clone();
    // positions currently holding the wanted eigenvalues
    let mut pos: Vec<usize> = members.to_vec();
    pos.sort_unstable();
    for (target, p) in pos.iter().enumerate() {
        let mut cur = *p;
        while cur > target {
            swap_adjacent(&mut z, &mut t, cur - 1);
            cur -= 1;
        }
    }
    let k = pos.len();
    let m = n - k;
    // Solve t11 y - y t22 = -t12 by triangular substitution.
    let mut y = CMatrix::zeros(k, m);
    for j in 0..m {
        let mut rhs: Vec<C64> = (0..k).map(|i| -t[(i, k + j)]).collect();
        for l in 0..j {
            let tl = t[(k + l, k + j)];
            for (i, r) in rhs.iter_mut().enumerate() {
                *r += y[(i, l)] * tl;
            }
        }
        let shift = t[(k + j, k + j)];
        for i in (0..k).rev() {
            let mut s = rhs[i];
            for l in (i + 1)..k {
                s -= t[(i, l)] * y[(l, j)];
            }
            y[(i, j)] = s / (t[(i, i)] - shift);
        }
    }
    let mut p = CMatrix::zeros(n, n);
    for i in 0..k {
        p[(i, i)] = one();
        for j in 0..m {
            p[(i, k + j)] = -y[(i, j)];
        }
    }
    &z * p * z.adjoint()
}

/// Eigen-decomposition of a Hermitian matrix (the input is symmetrised first).
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::new(h);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(1.0)]);
        let k = kernel(&m, 1e-12);
        assert_eq!(k.ncols(), 1);
        assert!((&m * &k).norm() < 1e-12);
    }

    #[test]
    fn kernel_of_wide_matrix_is_complete() {
        let m = CMatrix::from_row_slice(1, 3, &[c(1.0), c(0.0), c(0.0)]);
        assert_eq!(kernel(&m, 1e-12).ncols(), 2);
    }

    #[test]
    fn riesz_projector_of_diagonalisable_matrix() {
        let m = CMatrix::from_row_slice(3, 3, &[
            c(2.0), c(1.0), c(0.5),
            c(0.0), c(-1.0), c(3.0),
            c(0.0), c(0.0), c(2.0),
        ]);
        let (z, t) = schur(&m).unwrap();
        let diag: Vec<C64> = (0..3).map(|i| t[(i, i)]).collect();
        let groups = cluster(&diag, 1e-9);
        assert_eq!(groups.len(), 2);
        let mut total = CMatrix::zeros(3, 3);
        for g in &groups {
            let p = riesz_projector(&z, &t, g);
            assert!((&p * &p - &p).norm() < 1e-10);
            assert!((&m * &p - &p * &m).norm() < 1e-10);
            total += p;
        }
        assert!((total - CMatrix::identity(3, 3)).norm() < 1e-10);
    }

    #[test]
    fn cluster_merges_close_values() {
        let v = [c(1.0), c(1.0 + 1e-12), c(2.0)];
        assert_eq!(cluster(&v, 1e-9).len(), 2);
    }

    #[test]
    fn arnoldi_reaches_invariant_subspace() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(2.0), c(2.0), c(3.0)]));
        let start = CVector::from_element(4, c(1.0));
        let a = arnoldi(&m, &start, 1e-12);
        assert_eq!(a.q.ncols(), 3);
    }
}
