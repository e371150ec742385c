//! Shorted operators, compatibility of positive weights with subspaces, and
//! the minus, star and weighted-star orders on complex matrices.
//!
//! The numerical core is generic over the real field ([`Real`], implemented
//! for `f64` and `f32`); the `*64` aliases below are the usual entry points.

pub mod approx;
pub mod compat;
pub mod error;
pub mod linalg;
pub mod orders;
pub mod projection;
pub mod psd;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod shorted;
pub mod subspace;
pub mod suites;
pub mod tolerance;

pub use error::{Error, Inclusion, Result};
pub use projection::{oblique_projection, Projection};
pub use psd::PsdOperator;
pub use report::{Check, Report};
pub use scalar::{ComplexMatrix, Real};
pub use subspace::{subspace_algebra, Subspace, SubspaceOp};
pub use tolerance::Tolerance;

pub use nalgebra::Complex;

pub type Matrix64 = ComplexMatrix<f64>;
pub type Subspace64 = Subspace<f64>;
pub type Psd64 = PsdOperator<f64>;
pub type Projection64 = Projection<f64>;
pub type Tolerance64 = Tolerance<f64>;

pub type Matrix32 = ComplexMatrix<f32>;
pub type Subspace32 = Subspace<f32>;
pub type Psd32 = PsdOperator<f32>;
pub type Projection32 = Projection<f32>;
pub type Tolerance32 = Tolerance<f32>;
