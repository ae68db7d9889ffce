use nalgebra::DMatrix;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::certificate::Check;
use super::GzError;
use crate::linalg::{
    gamma, h0_basis, intersection, k_basis, matrix_norm, numerical_rank, range_basis, subspace_sum, ComplexMatrix,
    ToleranceConfig,
};

/// `A = S + R` or `A = S R` with the identities that were checked.
#[derive(Debug, Clone)]
pub struct Split {
    pub s: ComplexMatrix,
    pub r: ComplexMatrix,
    pub checks: Vec<Check>,
}

impl Split {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn check_projection(a: &ComplexMatrix, p: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<(), GzError> {
    let n = a.require_square()?;
    if p.rows() != n || p.cols() != n {
        return Err(GzError::Shape(format!("A is {n}x{n} but P is {}x{}", p.rows(), p.cols())));
    }
    let (am, pm) = (a.as_dmatrix(), p.as_dmatrix());
    let idempotency = matrix_norm(&(pm * pm - pm));
    let commutation = matrix_norm(&(am * pm - pm * am));
    if idempotency > cfg.residual_tol || commutation > cfg.residual_tol {
        return Err(GzError::InvalidProjection { idempotency, commutation });
    }
    Ok(())
}

fn residual_check(name: &str, m: DMatrix<Complex64>, scale: f64, cfg: &ToleranceConfig) -> Check {
    Check::within(name, matrix_norm(&m) / scale.max(1.0), cfg.residual_tol)
}

/// `S = AP`, `R = A(I - P)`: `S + R = A` and `RS = SR = 0`, `RA = AR`.
pub fn additive_split(a: &ComplexMatrix, p: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Split, GzError> {
    check_projection(a, p, cfg)?;
    let n = a.rows();
    let (am, pm) = (a.as_dmatrix(), p.as_dmatrix());
    let q = DMatrix::<Complex64>::identity(n, n) - pm;
    let s = am * pm;
    let r = am * &q;
    let scale = a.norm2() * a.norm2();
    let checks = vec![
        residual_check("r_commutes_with_a", &r * am - am * &r, scale, cfg),
        residual_check("rs_zero", &r * &s, scale, cfg),
        residual_check("sr_zero", &s * &r, scale, cfg),
        residual_check("sum_is_a", &s + &r - am, a.norm2(), cfg),
    ];
    Ok(Split { s: ComplexMatrix::wrap(s), r: ComplexMatrix::wrap(r), checks })
}

/// `S = AP + (I - P)`, `R = P + A(I - P)`: `SR = RS = S + R - I = A`.
pub fn multiplicative_split(a: &ComplexMatrix, p: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Split, GzError> {
    check_projection(a, p, cfg)?;
    let n = a.rows();
    let (am, pm) = (a.as_dmatrix(), p.as_dmatrix());
    let identity = DMatrix::<Complex64>::identity(n, n);
    let q = &identity - pm;
    let s = am * pm + &q;
    let r = pm + am * &q;
    let scale = (1.0 + a.norm2()) * (1.0 + a.norm2());
    let checks = vec![
        residual_check("rs_is_a", &r * &s - am, scale, cfg),
        residual_check("sr_is_a", &s * &r - am, scale, cfg),
        residual_check("sum_minus_identity_is_a", &s + &r - &identity - am, 1.0 + a.norm2(), cfg),
    ];
    Ok(Split { s: ComplexMatrix::wrap(s), r: ComplexMatrix::wrap(r), checks })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuncturedSample {
    pub lambda: [f64; 2],
    /// `dim(N(A - λ) ∩ K(A - λ))`
    pub kernel_dim: usize,
    /// `codim(R(A - λ) + H₀(A - λ))`
    pub codim: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuncturedReport {
    /// `γ(A_M)` for `M = R(P)`.
    pub gamma: f64,
    /// `γ(A_M) / 2`; every sample lies strictly inside.
    pub radius: f64,
    pub alpha: usize,
    pub beta: usize,
    pub samples: Vec<PuncturedSample>,
}

impl PuncturedReport {
    pub fn passed(&self) -> bool {
        self.samples.iter().all(|s| s.pass)
    }
}

/// Samples `λ` in the punctured disk `0 < |λ| < γ(A_M) / 2` (three circles,
/// spiralling in angle) and compares the kernel and cokernel
/// dimensions of `A - λ` inside the analytic core against `α(A_M)`, `β(A_M)`.
///
/// In finite dimension the two sides agree only when `A_M` is invertible
/// (both are 0): a singular `A_M` fails every sample that is not an eigenvalue.
pub fn punctured_neighborhood_check(
    a: &ComplexMatrix,
    p: &ComplexMatrix,
    sample_count: usize,
    cfg: &ToleranceConfig,
) -> Result<PuncturedReport, GzError> {
    check_projection(a, p, cfg)?;
    let n = a.rows();
    let m_basis = range_basis(p, cfg);
    let dim_m = m_basis.dim();
    if dim_m == 0 {
        return Err(GzError::DegenerateRestriction);
    }
    let b = m_basis.matrix();
    let restricted = ComplexMatrix::wrap(b.adjoint() * a.as_dmatrix() * b);
    let g = gamma(&restricted, cfg).map_err(|_| GzError::DegenerateRestriction)?;
    let rank = numerical_rank(&restricted, cfg);
    let (alpha, beta) = (dim_m - rank, dim_m - rank);
    let radius = g / 2.0;

    // start off the real axis so real spectra are not hit head-on
    let phase = 0.3;
    let mut samples = Vec::with_capacity(sample_count);
    for k in 0..sample_count {
        let theta = phase + std::f64::consts::TAU * k as f64 / sample_count as f64;
        let lambda = Complex64::from_polar(radius * [0.9, 0.6, 0.3][k % 3], theta);
        let shifted = ComplexMatrix::wrap(a.as_dmatrix() - DMatrix::from_diagonal_element(n, n, lambda));
        let kernel = crate::linalg::kernel_basis(&shifted, cfg);
        let core = k_basis(&shifted, cfg)?;
        let kernel_dim = intersection(&kernel, &core, cfg).dim();
        let range = range_basis(&shifted, cfg);
        let h0 = h0_basis(&shifted, cfg)?;
        let codim = n - subspace_sum(&range, &h0, cfg).dim();
        samples.push(PuncturedSample {
            lambda: [lambda.re, lambda.im],
            kernel_dim,
            codim,
            pass: kernel_dim == alpha && codim == beta,
        });
    }
    Ok(PuncturedReport { gamma: g, radius, alpha, beta, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn dm(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn additive_on_diagonal() {
        let a = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let p = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let split = additive_split(&a, &p, &cfg()).unwrap();
        assert_eq!(split.s, ComplexMatrix::diag_real(&[2.0, 0.0]));
        assert_eq!(split.r, ComplexMatrix::zeros(2, 2));
        assert!(split.passed());
    }

    #[test]
    fn multiplicative_on_diagonal() {
        let a = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let p = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let split = multiplicative_split(&a, &p, &cfg()).unwrap();
        assert_eq!(split.s, ComplexMatrix::diag_real(&[2.0, 1.0]));
        assert_eq!(split.r, ComplexMatrix::diag_real(&[1.0, 0.0]));
        assert!(split.passed());
    }

    #[test]
    fn multiplicative_with_jordan_block() {
        let a = ComplexMatrix::jordan_block(Complex64::new(0.0, 0.0), 2).direct_sum(&ComplexMatrix::diag_real(&[3.0]));
        let p = ComplexMatrix::diag_real(&[1.0, 1.0, 0.0]);
        let split = multiplicative_split(&a, &p, &cfg()).unwrap();
        // block by block: S = J2 ⊕ [1], R = I2 ⊕ [3]
        let s = ComplexMatrix::jordan_block(Complex64::new(0.0, 0.0), 2).direct_sum(&ComplexMatrix::diag_real(&[1.0]));
        assert_eq!(split.s, s);
        assert_eq!(split.r, ComplexMatrix::diag_real(&[1.0, 1.0, 3.0]));
        assert!(split.passed());
    }

    #[test]
    fn non_commuting_projection_rejected() {
        let a = dm(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let p = ComplexMatrix::diag_real(&[1.0, 0.0]);
        assert!(matches!(additive_split(&a, &p, &cfg()), Err(GzError::InvalidProjection { .. })));
        let not_idempotent = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let b = ComplexMatrix::diag_real(&[1.0, 1.0]);
        assert!(matches!(multiplicative_split(&b, &not_idempotent, &cfg()), Err(GzError::InvalidProjection { .. })));
    }

    #[test]
    fn punctured_diagonal() {
        let a = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let p = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let report = punctured_neighborhood_check(&a, &p, 8, &cfg()).unwrap();
        assert_eq!(report.gamma, 2.0);
        assert_eq!((report.alpha, report.beta), (0, 0));
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn punctured_jordan_plus_scalar() {
        let a = ComplexMatrix::jordan_block(Complex64::new(0.0, 0.0), 2).direct_sum(&ComplexMatrix::diag_real(&[3.0]));
        let p = ComplexMatrix::diag_real(&[0.0, 0.0, 1.0]);
        let report = punctured_neighborhood_check(&a, &p, 12, &cfg()).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn punctured_rotation() {
        let a = dm(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let report = punctured_neighborhood_check(&a, &ComplexMatrix::identity(2), 6, &cfg()).unwrap();
        assert!((report.gamma - 1.0).abs() < 1e-12);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn degenerate_restriction() {
        let a = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let p = ComplexMatrix::diag_real(&[0.0, 1.0]);
        assert_eq!(punctured_neighborhood_check(&a, &p, 4, &cfg()).unwrap_err(), GzError::DegenerateRestriction);
    }
}
