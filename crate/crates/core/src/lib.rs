//! Drazin, generalized Drazin and g_z-inverses.
//!
//! Finite matrices are handled numerically ([`linalg`], [`gz`]); operators on
//! infinite-dimensional spaces with countable spectra are handled exactly
//! through symbolic models ([`spectral_sets`], [`operators`]).
//!
//! On matrices every spectrum is finite, so the three notions coincide: the
//! g_z-inverse for the spectral set of 0 is the Drazin inverse. The operator
//! models are where they separate, e.g. `diag(1, 1/2, 1/3, ...)` is
//! g_z-invertible at 0 but not generalized Drazin invertible.

pub mod exact;
pub mod gz;
pub mod linalg;
pub mod operators;
pub mod report;
pub mod spectral_sets;

pub use exact::{ExactComplex, Rational};
pub use linalg::{ComplexMatrix, ToleranceConfig};
