//! Standard algebras, direct sums, basis changes and non-proper mutants used
//! by tests, the acceptance suite and the CLI.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{Element, StarAlgebra};
use crate::linalg::one;
use crate::{CMatrix, CVector, C64};

/// `ℂ` with the identity involution.
pub fn complex_numbers() -> StarAlgebra {
    diagonal_algebra(1)
}

/// `ℂⁿ` with coordinatewise product and conjugation, basis of minimal idempotents.
pub fn diagonal_algebra(n: usize) -> StarAlgebra {
    let mut left = vec![CMatrix::zeros(n, n); n];
    for (i, l) in left.iter_mut().enumerate() {
        l[(i, i)] = one();
    }
    StarAlgebra::new(left, CMatrix::identity(n, n)).expect("diagonal algebra is well-formed")
}

/// `M_n(ℂ)` with conjugate transpose; basis `E_pq` at index `p·n + q`.
pub fn matrix_algebra(n: usize) -> StarAlgebra {
    let dim = n * n;
    let mut left = vec![CMatrix::zeros(dim, dim); dim];
    let mut star = CMatrix::zeros(dim, dim);
    for p in 0..n {
        for q in 0..n {
            let i = p * n + q;
            // E_pq E_rs = δ_qr E_ps
            for s in 0..n {
                left[i][(p * n + s, q * n + s)] = one();
            }
            star[(q * n + p, i)] = one();
        }
    }
    let labels = (0..n)
        .flat_map(|p| (0..n).map(move |q| format!("E{}{}", p + 1, q + 1)))
        .collect();
    StarAlgebra::new(left, star)
        .expect("matrix algebra is well-formed")
        .with_labels(labels)
        .expect("label count matches")
}

/// Block-diagonal direct sum.
pub fn direct_sum(parts: &[StarAlgebra]) -> StarAlgebra {
    let dim: usize = parts.iter().map(|p| p.dim()).sum();
    let mut left = Vec::with_capacity(dim);
    let mut star = CMatrix::zeros(dim, dim);
    let mut offset = 0;
    for p in parts {
        let d = p.dim();
        for l in p.left_matrices() {
            let mut big = CMatrix::zeros(dim, dim);
            big.view_mut((offset, offset), (d, d)).copy_from(l);
            left.push(big);
        }
        star.view_mut((offset, offset), (d, d)).copy_from(p.star_matrix());
        offset += d;
    }
    StarAlgebra::new(left, star).expect("direct sum is well-formed")
}

/// `⊕_k M_{n_k}(ℂ) ⊕ ℂ^m` in the matrix-unit basis.
pub fn block_algebra(blocks: &[usize], abelian: usize) -> StarAlgebra {
    let mut parts: Vec<StarAlgebra> = blocks.iter().map(|&n| matrix_algebra(n)).collect();
    if abelian > 0 {
        parts.push(diagonal_algebra(abelian));
    }
    direct_sum(&parts)
}

/// `ℂ ⊕ ℂ` with the swap involution `(a, b)* = (b̄, ā)`: semisimple, not proper.
pub fn swap_c2() -> StarAlgebra {
    swap_pair(1)
}

/// `M_n ⊕ M_n` with `(x, y)* = (y^H, x^H)`.
pub fn swap_pair(n: usize) -> StarAlgebra {
    let m = matrix_algebra(n);
    let d = m.dim();
    let sum = direct_sum(&[m.clone(), m]);
    let mut star = CMatrix::zeros(2 * d, 2 * d);
    let s = sum.star_matrix();
    for i in 0..d {
        for k in 0..d {
            star[(d + k, i)] = s[(k, i)];
            star[(k, d + i)] = s[(k, i)];
        }
    }
    StarAlgebra::new(sum.left_matrices().to_vec(), star).expect("swap algebra is well-formed")
}

/// Non-unital `ℂx` with `x² = 0`, `x* = x`.
pub fn nilpotent_line() -> StarAlgebra {
    StarAlgebra::new(vec![CMatrix::zeros(1, 1)], CMatrix::identity(1, 1))
        .expect("nilpotent line is well-formed")
}

/// `M_n[ε]/(ε²)` with `(a + bε)* = a^H + b^H ε`: a nilpotent extension of `M_n`.
/// Basis: `E_pq` then `E_pq ε`.
pub fn dual_numbers(n: usize) -> StarAlgebra {
    let m = matrix_algebra(n);
    let d = m.dim();
    let dim = 2 * d;
    let mut left = vec![CMatrix::zeros(dim, dim); dim];
    for i in 0..d {
        let l = &m.left_matrices()[i];
        // e_i · (y0 + y1 ε) = e_i y0 + e_i y1 ε
        left[i].view_mut((0, 0), (d, d)).copy_from(l);
        left[i].view_mut((d, d), (d, d)).copy_from(l);
        // (e_i ε) · y0 = e_i y0 ε; (e_i ε)(y1 ε) = 0
        left[d + i].view_mut((d, 0), (d, d)).copy_from(l);
    }
    let mut star = CMatrix::zeros(dim, dim);
    star.view_mut((0, 0), (d, d)).copy_from(m.star_matrix());
    star.view_mut((d, d), (d, d)).copy_from(m.star_matrix());
    StarAlgebra::new(left, star).expect("dual numbers are well-formed")
}

/// Re-express the algebra in the basis given by the (invertible) columns of `p`.
pub fn change_basis(alg: &StarAlgebra, p: &CMatrix) -> StarAlgebra {
    let n = alg.dim();
    assert_eq!(p.shape(), (n, n), "basis change must be square");
    let pinv = p.clone().try_inverse().expect("basis change must be invertible");
    let mut left = Vec::with_capacity(n);
    let mut star = CMatrix::zeros(n, n);
    for i in 0..n {
        let f = p.column(i).into_owned();
        left.push(&pinv * alg.left_mul_matrix(&f) * p);
        star.set_column(i, &(&pinv * alg.star_vec(&f)));
    }
    StarAlgebra::new(left, star).expect("basis change preserves shape")
}

pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    m.qr().q()
}

/// The algebra in a random orthonormal basis.
pub fn conjugated<R: Rng + ?Sized>(alg: &StarAlgebra, rng: &mut R) -> StarAlgebra {
    change_basis(alg, &random_unitary(alg.dim(), rng))
}

pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    CVector::from_fn(n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn random_element<R: Rng + ?Sized>(alg: &Arc<StarAlgebra>, rng: &mut R) -> Element {
    Element::new(alg, random_vector(alg.dim(), rng)).expect("length matches")
}

pub fn random_selfadjoint<R: Rng + ?Sized>(alg: &Arc<StarAlgebra>, rng: &mut R) -> Element {
    let a = random_element(alg, rng);
    (&a + &a.star()).scale(C64::new(0.5, 0.0))
}

/// `a* a` for a random `a`.
pub fn random_positive<R: Rng + ?Sized>(alg: &Arc<StarAlgebra>, rng: &mut R) -> Element {
    let a = random_element(alg, rng);
    &a.star() * &a
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::DEFAULT_TOL;

    #[test]
    fn generated_algebras_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let algs = [
            matrix_algebra(3),
            block_algebra(&[2, 1], 2),
            swap_pair(2),
            dual_numbers(2),
            conjugated(&block_algebra(&[2], 1), &mut rng),
            nilpotent_line().unitize(),
        ];
        for a in &algs {
            let r = a.validate(DEFAULT_TOL);
            assert!(r.passed, "{a:?}: {r:?}");
        }
    }

    #[test]
    fn block_algebra_dimension() {
        let a = block_algebra(&[2, 3], 4);
        assert_eq!(a.dim(), 4 + 9 + 4);
        assert!(a.is_unital());
    }

    #[test]
    fn dual_numbers_are_unital() {
        let a = dual_numbers(2);
        assert!(a.is_unital());
        assert_eq!(a.dim(), 8);
    }

    #[test]
    fn conjugation_keeps_unitality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = conjugated(&matrix_algebra(2), &mut rng);
        assert!(a.is_unital());
    }
}
