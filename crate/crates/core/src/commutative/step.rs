//! Finite-range functions over a Boolean set algebra with exact complex
//! rational values.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::sets::SetAlgebra;
use crate::{Error, Result};

pub type ExactComplex = Complex<BigRational>;

pub fn exact(re: i64, im: i64) -> ExactComplex {
    Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
}

pub fn exact_ratio(re: (i64, i64), im: (i64, i64)) -> ExactComplex {
    Complex::new(
        BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
        BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
    )
}

pub fn to_c64(z: &ExactComplex) -> crate::C64 {
    crate::C64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// `|z|²`, exact.
pub fn norm_sqr(z: &ExactComplex) -> BigRational {
    &z.re * &z.re + &z.im * &z.im
}

/// `Σ v_i χ_{U_i}` over a partition `{U_i}` of the universe.
///
/// Canonical form: cells are non-empty, values distinct, sorted by value.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<B: SetAlgebra> {
    backend: B,
    cells: Vec<(B::Set, ExactComplex)>,
}

fn value_key(z: &ExactComplex) -> (BigRational, BigRational) {
    (z.re.clone(), z.im.clone())
}

impl<B: SetAlgebra> StepFunction<B> {
    /// Build from cells, which must be pairwise disjoint and cover the universe.
    pub fn from_cells(backend: &B, cells: Vec<(B::Set, ExactComplex)>) -> Result<Self> {
        let mut covered = backend.empty();
        for (s, _) in &cells {
            if !backend.is_empty(&backend.intersect(&covered, s)) {
                return Err(Error::Malformed("step function cells overlap".into()));
            }
            covered = backend.union(&covered, s);
        }
        if covered != backend.universe() {
            return Err(Error::Malformed("step function cells do not cover the universe".into()));
        }
        Ok(Self::canonical(backend, cells))
    }

    pub fn constant(backend: &B, v: ExactComplex) -> Self {
        Self::canonical(backend, vec![(backend.universe(), v)])
    }

    /// `χ_U`.
    pub fn indicator(backend: &B, set: &B::Set) -> Self {
        Self::canonical(
            backend,
            vec![(set.clone(), ExactComplex::one()), (backend.complement(set), ExactComplex::zero())],
        )
    }

    fn canonical(backend: &B, cells: Vec<(B::Set, ExactComplex)>) -> Self {
        let mut merged: Vec<(B::Set, ExactComplex)> = Vec::new();
        for (s, v) in cells {
            if backend.is_empty(&s) {
                continue;
            }
            match merged.iter_mut().find(|(_, w)| *w == v) {
                Some(cell) => cell.0 = backend.union(&cell.0, &s),
                None => merged.push((s, v)),
            }
        }
        merged.sort_by_key(|(_, v)| value_key(v));
        StepFunction { backend: backend.clone(), cells: merged }
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn cells(&self) -> &[(B::Set, ExactComplex)] {
        &self.cells
    }

    pub fn eval(&self, point: usize) -> ExactComplex {
        self.cells
            .iter()
            .find(|(s, _)| self.backend.contains(s, point))
            .map(|(_, v)| v.clone())
            .unwrap_or_else(ExactComplex::zero)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&ExactComplex, &ExactComplex) -> ExactComplex) -> Result<Self> {
        if self.backend != other.backend {
            return Err(Error::BackendMismatch);
        }
        let b = &self.backend;
        let mut cells = Vec::with_capacity(self.cells.len() * other.cells.len());
        for (s, v) in &self.cells {
            for (t, w) in &other.cells {
                let st = b.intersect(s, t);
                if !b.is_empty(&st) {
                    cells.push((st, f(v, w)));
                }
            }
        }
        Ok(Self::canonical(b, cells))
    }

    fn map(&self, f: impl Fn(&ExactComplex) -> ExactComplex) -> Self {
        let cells = self.cells.iter().map(|(s, v)| (s.clone(), f(v))).collect();
        Self::canonical(&self.backend, cells)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        self.map(|v| v * c)
    }

    pub fn star(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|(_, v)| v.is_zero())
    }

    pub fn is_projection(&self) -> bool {
        self.cells.iter().all(|(_, v)| v.is_zero() || v.is_one())
    }

    /// The set where `f ≠ 0`.
    pub fn support(&self) -> B::Set {
        self.cells
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .fold(self.backend.empty(), |acc, (s, _)| self.backend.union(&acc, s))
    }

    /// `f = Σ λ χ_U` over the nonzero canonical cells, exactly.
    pub fn spectral_decompose(&self) -> Vec<(ExactComplex, B::Set)> {
        self.cells
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(s, v)| (v.clone(), s.clone()))
            .collect()
    }

    /// `RP(f) = χ_{supp f}`.
    pub fn rp(&self) -> Self {
        Self::indicator(&self.backend, &self.support())
    }

    /// `max |f|²`, exact.
    pub fn sup_norm_sqr(&self) -> BigRational {
        self.cells
            .iter()
            .map(|(_, v)| norm_sqr(v))
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// `max |f|`, the C*-norm.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm_sqr().to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// `x` with `fxf = f` and `xfx = x`: invert the nonzero values.
    pub fn quasi_inverse(&self) -> Self {
        self.map(|v| if v.is_zero() { v.clone() } else { v.inv() })
    }

    /// Square root of a positive function (all values real and `≥ 0`) when
    /// every value is a rational square; `None` otherwise.
    pub fn exact_sqrt(&self) -> Option<Self> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for (s, v) in &self.cells {
            if !v.im.is_zero() || v.re.is_negative() {
                return None;
            }
            let n = v.re.numer().sqrt();
            let d = v.re.denom().sqrt();
            if &n * &n != *v.re.numer() || &d * &d != *v.re.denom() {
                return None;
            }
            cells.push((s.clone(), Complex::new(BigRational::new(n, d), BigRational::zero())));
        }
        Some(Self::canonical(&self.backend, cells))
    }
}

/// Projection generating the annihilator of `fs`: `χ` of the common zero set.
pub fn annihilator<B: SetAlgebra>(backend: &B, fs: &[StepFunction<B>]) -> Result<StepFunction<B>> {
    let mut zero = backend.universe();
    for f in fs {
        if f.backend() != backend {
            return Err(Error::BackendMismatch);
        }
        zero = backend.difference(&zero, &f.support());
    }
    Ok(StepFunction::indicator(backend, &zero))
}

/// `p ∨ q = p + q − pq` for projections.
pub fn join<B: SetAlgebra>(p: &StepFunction<B>, q: &StepFunction<B>) -> Result<StepFunction<B>> {
    p.add(q)?.sub(&p.mul(q)?)
}

/// `p ∧ q = pq` for projections.
pub fn meet<B: SetAlgebra>(p: &StepFunction<B>, q: &StepFunction<B>) -> Result<StepFunction<B>> {
    p.mul(q)
}

/// Exact rank of a complex rational matrix given by rows.
pub fn exact_rank(mut rows: Vec<Vec<ExactComplex>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let factor = &rows[r][c] / &pivot;
                for k in c..ncols {
                    let sub = &factor * &rows[rank][k];
                    rows[r][k] = &rows[r][k] - sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Exact rank of the evaluations of `fs` at `0..points`; a lower bound on
/// the dimension of their span.
pub fn evaluation_rank<B: SetAlgebra>(fs: &[StepFunction<B>], points: usize) -> usize {
    let rows = (0..points).map(|x| fs.iter().map(|f| f.eval(x)).collect()).collect();
    exact_rank(rows)
}
