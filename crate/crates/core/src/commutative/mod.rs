//! The commutative model: finite-range step functions over a Boolean set
//! algebra with exact arithmetic.
//!
//! Two backends are provided: all subsets of a finite universe
//! ([`FiniteSets`]) and the ultimately periodic subsets of `ℕ`
//! ([`PeriodicSets`]), whose step-function algebra is infinite dimensional.
//! For the periodic backend only finite joins and meets are claimed; whether
//! its projection lattice is complete is left open. The expectation is that
//! this algebra is Rickart but not Baer; nothing here tests that.

mod sets;
mod step;

use std::sync::Arc;

pub use sets::{FiniteSets, PeriodicSet, PeriodicSets, SetAlgebra};
pub use step::{
    annihilator, evaluation_rank, exact, exact_rank, exact_ratio, join, meet, norm_sqr, to_c64, ExactComplex,
    StepFunction,
};

use crate::algebra::{Element, StarAlgebra};
use crate::instances::diagonal_algebra;
use crate::CVector;

/// `ℂⁿ` in the basis of point indicators `χ_{i}`, the structure-constant
/// form of the finite-backend step functions.
pub fn export_finite(backend: &FiniteSets) -> StarAlgebra {
    let n = backend.size();
    diagonal_algebra(n)
        .with_labels((0..n).map(|i| format!("chi{i}")).collect())
        .expect("label count matches")
}

/// Coordinates of `f` in the point-indicator basis.
pub fn to_element(alg: &Arc<StarAlgebra>, f: &StepFunction<FiniteSets>) -> Element {
    let n = f.backend().size();
    let v = CVector::from_iterator(n, (0..n).map(|i| to_c64(&f.eval(i))));
    Element::new(alg, v).expect("exported algebra has matching dimension")
}
