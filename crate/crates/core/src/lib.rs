//! A workbench for finite-dimensional complex *-algebras.
//!
//! Algebras are given by structure constants and an involution matrix
//! ([`StarAlgebra`]). On top of that the crate builds spectral projection
//! decompositions, right/left projections, quasi-inverses and square roots
//! ([`spectral`]), annihilators and the projection lattice with
//! Rickart/Baer checkers ([`rickart`]), the radical, properness and hermitian
//! checks together with the central and matrix-block decomposition
//! ([`structure`]), group algebras of finite groups ([`group`]) and an exact
//! commutative model made of step functions over Boolean set algebras
//! ([`commutative`]).

pub mod algebra;
pub mod commutative;
mod error;
pub mod group;
pub mod instances;
pub(crate) mod linalg;
pub mod report;
pub mod rickart;
pub mod spectral;
pub mod structure;

pub use algebra::{Element, Polynomial, Spectrum, StarAlgebra, ValidationReport};
pub use error::{Error, Result};
pub use report::CheckReport;

/// Complex double-precision scalar.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex column vector (coefficients over an algebra basis).
pub type CVector = nalgebra::DVector<C64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Default relative tolerance for rank decisions, clustering and certification.
pub const DEFAULT_TOL: f64 = 1e-9;
