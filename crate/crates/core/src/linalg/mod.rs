//! Dense complex matrices with one tolerance policy for every rank decision.

mod matrix;
mod structure;
mod subspace;
mod svd;

pub use matrix::{ComplexMatrix, MatrixJson};
pub use structure::{
    ascent, ascent_descent, condition_number, core_nilpotent_split, descent, dis, eigenvalues, gamma, h0_basis, k_basis, kernel_chain, range_chain,
    stable_iteration_profile, stable_iteration_profile_by_intersection,
};
pub use subspace::{intersection, kernel_basis, numerical_rank, range_basis, subspace_sum, SubspaceBasis};

use serde::{Deserialize, Serialize};

pub(crate) fn matrix_norm(m: &nalgebra::DMatrix<num::complex::Complex64>) -> f64 {
    matrix::spectral_norm(m)
}

pub(crate) fn matrix_power(m: &nalgebra::DMatrix<num::complex::Complex64>, n: u32) -> nalgebra::DMatrix<num::complex::Complex64> {
    matrix::dpow(m, n, m.nrows())
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must be nonempty")]
    Empty,
    #[error("reduced minimal modulus is undefined for the zero matrix")]
    UndefinedGamma,
    #[error("eigenvalue iteration did not converge")]
    EigenFailure,
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("unknown tolerance profile `{0}` (expected `default` or `strict`)")]
    UnknownProfile(String),
}

/// Environment variable selecting the default tolerance profile.
pub const TOLERANCE_PROFILE_ENV: &str = "GZSPEC_TOL_PROFILE";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Singular values at most `rank_rtol` times the reference scale count as zero.
    pub rank_rtol: f64,
    /// Threshold for every verification residual.
    pub residual_tol: f64,
    /// Stop quadrature once successive estimates differ by less than this.
    pub quadrature_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { rank_rtol: 1e-10, residual_tol: 1e-8, quadrature_tol: 1e-10 }
    }
}

impl ToleranceConfig {
    pub fn strict() -> Self {
        Self { rank_rtol: 1e-12, residual_tol: 1e-10, quadrature_tol: 1e-12 }
    }

    pub fn profile(name: &str) -> Result<Self, LinalgError> {
        match name.trim() {
            "" | "default" => Ok(Self::default()),
            "strict" => Ok(Self::strict()),
            other => Err(LinalgError::UnknownProfile(other.to_string())),
        }
    }

    /// Profile named by `GZSPEC_TOL_PROFILE`, or the default one when unset.
    pub fn from_env() -> Result<Self, LinalgError> {
        match std::env::var(TOLERANCE_PROFILE_ENV) {
            Ok(name) => Self::profile(&name),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<(), LinalgError> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(self.rank_rtol) || self.rank_rtol >= 1.0 {
            return Err(LinalgError::InvalidTolerance("rank_rtol must lie in (0, 1)".into()));
        }
        if !ok(self.residual_tol) || !ok(self.quadrature_tol) {
            return Err(LinalgError::InvalidTolerance("tolerances must be positive and finite".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles() {
        assert_eq!(ToleranceConfig::profile("default").unwrap(), ToleranceConfig::default());
        assert_eq!(ToleranceConfig::profile("strict").unwrap().rank_rtol, 1e-12);
        assert!(ToleranceConfig::profile("loose").is_err());
        let bad = ToleranceConfig { rank_rtol: 1.5, ..Default::default() };
        assert!(bad.validate().is_err());
        assert!(ToleranceConfig::default().validate().is_ok());
    }
}
