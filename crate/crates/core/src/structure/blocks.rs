//! Matrix units for simple blocks and the change of basis onto `⊕ M_{n_k}`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::element::projection_defect;
use crate::algebra::StarAlgebra;
use crate::instances::{block_algebra, random_vector};
use crate::linalg::column_space_scaled;
use crate::spectral::spectral_parts;
use crate::{CMatrix, CVector, Error, Result, C64};

/// A system `u_pq` (row-major, `units[p·n + q]`) with `u_pq u_rs = δ_qr u_ps`,
/// `u_pq* = u_qp` and `Σ u_pp = 1`.
#[derive(Clone, Debug)]
pub struct MatrixUnits {
    pub n: usize,
    pub units: Vec<CVector>,
    pub residual: f64,
}

impl MatrixUnits {
    pub fn get(&self, p: usize, q: usize) -> &CVector {
        &self.units[p * self.n + q]
    }
}

/// `dim(eBe)`.
fn corner_dim(alg: &StarAlgebra, e: &CVector, tol: f64) -> usize {
    let m = alg.right_mul_matrix(e) * alg.left_mul_matrix(e);
    column_space_scaled(&m, tol, 1.0).ncols()
}

fn coefficient_on(x: &CVector, e: &CVector) -> C64 {
    e.dotc(x) / C64::from(e.norm_squared())
}

/// Refine `1` into minimal projections `e` (`dim eBe = 1`) using spectral
/// projections of compressions `e b e` of random selfadjoint `b`.
fn minimal_projections(alg: &StarAlgebra, unit: &CVector, tol: f64, rng: &mut ChaCha8Rng) -> Vec<CVector> {
    let mut projs = vec![unit.clone()];
    for _ in 0..=alg.dim() {
        if projs.iter().all(|e| corner_dim(alg, e, tol) == 1) {
            break;
        }
        let mut next = Vec::new();
        for e in projs {
            if corner_dim(alg, &e, tol) == 1 {
                next.push(e);
                continue;
            }
            let b = random_vector(alg.dim(), rng);
            let b = (&b + alg.star_vec(&b)) * C64::from(0.5);
            let c = alg.mul_vec(&alg.mul_vec(&e, &b), &e);
            let mut rest = e.clone();
            for (_, p) in spectral_parts(alg, &c, tol) {
                rest -= &p;
                next.push(p);
            }
            if rest.norm() > tol.sqrt() * e.norm().max(1.0) {
                next.push(rest);
            }
        }
        projs = next;
    }
    projs
}

/// Matrix units for a simple unital block `B ≅ M_n` with proper involution.
pub fn block_star_isomorphism(block: &StarAlgebra, tol: f64, seed: u64) -> Result<MatrixUnits> {
    let dim = block.dim();
    let n = (dim as f64).sqrt().round() as usize;
    if n * n != dim {
        return Err(Error::Degenerate(format!("block of dimension {dim} is not a full matrix algebra")));
    }
    let unit = block.unit().ok_or(Error::NotUnital)?.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let projs = minimal_projections(block, &unit, tol, &mut rng);
    if projs.len() != n || projs.iter().any(|e| corner_dim(block, e, tol) != 1) {
        return Err(Error::DegenerateRandomness);
    }
    let e1 = &projs[0];
    let mut first_row = vec![e1.clone()];
    for ep in &projs[1..] {
        let mut found = None;
        for _ in 0..8 {
            let b = random_vector(dim, &mut rng);
            let x = block.mul_vec(&block.mul_vec(e1, &b), ep);
            if x.norm() > tol.sqrt() * b.norm() {
                found = Some(x);
                break;
            }
        }
        let x = found.ok_or(Error::DegenerateRandomness)?;
        // x* x = c·e_p with c > 0
        let y = block.mul_vec(&block.star_vec(&x), &x);
        let c = coefficient_on(&y, ep);
        if c.re <= 0.0 {
            return Err(Error::NotPositive { value: c.re });
        }
        first_row.push(x * C64::from(1.0 / c.re.sqrt()));
    }
    let mut units = Vec::with_capacity(dim);
    for p in 0..n {
        let up = block.star_vec(&first_row[p]);
        for q in 0..n {
            units.push(block.mul_vec(&up, &first_row[q]));
        }
    }
    let residual = matrix_unit_residual(block, n, &units, &unit);
    if residual > tol.sqrt() {
        return Err(Error::Certification { what: "matrix units", residual });
    }
    Ok(MatrixUnits { n, units, residual })
}

fn matrix_unit_residual(alg: &StarAlgebra, n: usize, units: &[CVector], unit: &CVector) -> f64 {
    let mut worst: f64 = 0.0;
    let mut diag = CVector::zeros(alg.dim());
    for p in 0..n {
        diag += &units[p * n + p];
        worst = worst.max(projection_defect(alg, &units[p * n + p]));
        for q in 0..n {
            let u = &units[p * n + q];
            worst = worst.max((alg.star_vec(u) - &units[q * n + p]).norm());
            for r in 0..n {
                for s in 0..n {
                    let prod = alg.mul_vec(u, &units[r * n + s]);
                    let expect = if q == r { units[p * n + s].clone() } else { CVector::zeros(alg.dim()) };
                    worst = worst.max((prod - expect).norm());
                }
            }
        }
    }
    worst.max((diag - unit).norm())
}

/// Coordinates change `A → ⊕ M_{n_k}` (blocks in the given order, `M_1`
/// blocks for commutative atoms) and the worst structure-constant and
/// involution discrepancy against the canonical algebra.
pub fn round_trip_residual(alg: &StarAlgebra, systems: &[MatrixUnits]) -> Result<f64> {
    let cols: Vec<CVector> = systems.iter().flat_map(|s| s.units.iter().cloned()).collect();
    if cols.len() != alg.dim() {
        return Err(Error::Degenerate(format!(
            "matrix units span {} of {} dimensions",
            cols.len(),
            alg.dim()
        )));
    }
    let p = CMatrix::from_columns(&cols);
    let pinv = p.clone().try_inverse().ok_or(Error::Certification {
        what: "matrix-unit basis",
        residual: f64::INFINITY,
    })?;
    let sizes: Vec<usize> = systems.iter().map(|s| s.n).collect();
    let canon = block_algebra(&sizes, 0);
    let n = alg.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let c = &pinv * alg.mul_vec(&cols[i], &cols[j]);
            worst = worst.max((c - canon.left_matrices()[i].column(j)).camax());
        }
        let s = &pinv * alg.star_vec(&cols[i]);
        worst = worst.max((s - canon.star_matrix().column(i)).camax());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::DEFAULT_TOL as TOL;

    #[test]
    fn matrix_units_of_m3() {
        let m = instances::matrix_algebra(3);
        let u = block_star_isomorphism(&m, TOL, 0).unwrap();
        assert_eq!(u.n, 3);
        assert!(u.residual < 1e-9);
        assert!(round_trip_residual(&m, &[u]).unwrap() < 1e-8);
    }

    #[test]
    fn matrix_units_in_rotated_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = instances::conjugated(&instances::matrix_algebra(2), &mut rng);
        let u = block_star_isomorphism(&m, TOL, 3).unwrap();
        assert!(round_trip_residual(&m, &[u]).unwrap() < 1e-8);
    }

    #[test]
    fn one_dimensional_block() {
        let c = instances::complex_numbers();
        let u = block_star_isomorphism(&c, TOL, 0).unwrap();
        assert_eq!(u.n, 1);
        assert!((u.units[0][0] - C64::from(1.0)).norm() < 1e-12);
    }

    #[test]
    fn non_square_dimension_is_rejected() {
        assert!(block_star_isomorphism(&instances::diagonal_algebra(2), TOL, 0).is_err());
    }
}
