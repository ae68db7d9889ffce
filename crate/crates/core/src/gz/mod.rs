//! Drazin and g_z-inverses of matrices, by the block route and by resolvent
//! quadrature, with residual certificates.
//!
//! In finite dimension every spectrum is finite, so the three inverse notions
//! coincide with the Drazin inverse once `σ` is the eigenvalue cluster at 0.
//! Choosing `σ` larger gives the g_z-inverses `(A + r P_σ)^{-1} (I - P_σ)`.

mod certificate;
mod contour;
mod drazin;
mod inverse;
mod selection;
mod splits;

pub use certificate::{verify_certificate, Check, Claim, InverseCertificate};
pub use contour::{contour_gz_inverse, riesz_projection, Contour, ContourJson};
pub use drazin::drazin_inverse;
pub use inverse::{gz_inverse_for_set, separating_contours, GzInverse};
pub use selection::{eigen_clusters, EigenCluster, EigenSelection, SpectralSplit};
pub use splits::{
    additive_split, multiplicative_split, punctured_neighborhood_check, PuncturedReport, PuncturedSample, Split,
};

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GzError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid contour: {0}")]
    InvalidContour(String),
    #[error("contour passes within {distance:.3e} of an eigenvalue (clearance {clearance:.3e})")]
    ContourTooClose { distance: f64, clearance: f64 },
    #[error("quadrature did not converge within {nodes} nodes (last change {change:.3e})")]
    NoConvergence { nodes: usize, change: f64 },
    #[error("restricted block is ill-conditioned (condition {condition:.3e})")]
    IllConditioned { condition: f64 },
    #[error("invalid spectral split: {0}")]
    InvalidSpectralSplit(String),
    #[error("|r| = {r_abs} must exceed max |λ| over σ = {bound}")]
    ShiftTooSmall { r_abs: f64, bound: f64 },
    #[error("no circle separates σ(A)\\σ from σ and 0")]
    NoSeparatingContour,
    #[error("not a commuting projection: ‖P²-P‖ = {idempotency:.3e}, ‖AP-PA‖ = {commutation:.3e}")]
    InvalidProjection { idempotency: f64, commutation: f64 },
    #[error("restriction to R(P) has γ = 0")]
    DegenerateRestriction,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Condition above which the block route refuses to invert.
pub const MAX_CONDITION: f64 = 1e12;

pub(crate) fn rel(residual: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        residual / scale
    } else {
        residual
    }
}
