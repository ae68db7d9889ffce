//! Exact models of operators on infinite-dimensional spaces.
//!
//! Each model has a spectrum that is known in closed form, so kernel and
//! cokernel dimensions, Fredholm indices and the position of a point in the
//! invertibility lattice are decided exactly. This is where g_z-invertibility
//! separates from generalized Drazin invertibility: `diag(1, 1/2, 1/3, ...)`
//! is g_z-invertible at 0 while 0 is not isolated in its spectrum.
//!
//! The diagonal model of the harmonic sequence has the right spectrum and
//! g_z behaviour but not the Drazin spectrum of operators built from
//! quasi-nilpotent blocks; those are out of scope.

mod classify;
mod diagonal;
mod dim;
mod json;
mod local;
mod model;
mod spectrum;

pub use classify::{classify, index, point_data, spectral_tiers, Classification, Index, OneSided, OperatorClass, PointData, SpectralTiers};
pub use diagonal::{gz_inverse_diagonal, perturb, DiagonalCertificate, DiagonalGzInverse};
pub use dim::Dim;
pub use json::{DiagonalJson, OperatorJson, WeightsJson};
pub use model::{
    adjoint_model, truncate, DiagonalModel, DiagonalPerturbation, Direction, OperatorModel, WeightedShift, Weights,
};
pub use spectrum::{spectrum, Disk, OperatorSpectrum};

use crate::linalg::LinalgError;
use crate::spectral_sets::SpectralError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OperatorError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unsupported spectral shape: {0}")]
    UnsupportedSpectralShape(String),
    #[error("not semi-Fredholm at this point: {0}")]
    NotSemiFredholm(String),
    #[error("invalid spectral set: {0}")]
    InvalidSpectralSet(String),
    #[error("perturbation changed the g_z tier at 0 ({before} -> {after})")]
    TierChanged { before: String, after: String },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
