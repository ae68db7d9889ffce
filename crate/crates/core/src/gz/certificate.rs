use nalgebra::DMatrix;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::drazin::drazin_core;
use super::{rel, GzError};
use crate::linalg::{ascent, descent, dis, ComplexMatrix, ToleranceConfig};

/// What an inverse is supposed to be; decides which checks apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Drazin,
    GzInverse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
}

impl Check {
    pub fn new(name: &str, pass: bool, residual: f64) -> Self {
        Self { name: name.to_string(), pass, residual }
    }

    /// Passes when `residual <= tol`.
    pub fn within(name: &str, residual: f64, tol: f64) -> Self {
        Self::new(name, residual <= tol, residual)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseCertificate {
    pub inverse: ComplexMatrix,
    pub claim: Claim,
    /// `‖AS - SA‖`
    pub commutation_residual: f64,
    /// `‖SAS - S‖`
    pub inner_residual: f64,
    /// `‖A^p S A - A^p‖` at `p = claimed_index`.
    pub power_residual: Option<f64>,
    /// Nilpotency degree of `A²S - A` on the range of `I - AS`; `None` when not nilpotent.
    pub core_residual: Option<usize>,
    /// Smallest `n` with `A^n S A = A^n` to tolerance (see `first_vanishing`).
    pub claimed_index: Option<usize>,
    /// `dis(A)` at the configured rank tolerance.
    pub dis: usize,
    /// Sorted by name.
    pub checks: Vec<Check>,
}

impl InverseCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub(crate) fn push_check(&mut self, check: Check) {
        self.checks.push(check);
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }
}

fn norm(m: &DMatrix<Complex64>) -> f64 {
    crate::linalg::matrix_norm(m)
}

/// Smallest `k <= dim` at which `M^k X` vanishes, with its norm.
///
/// `k = 0` needs `‖X‖ <= tol * max(1, scale)`. Beyond that, `M^k X` counts as
/// zero once one more factor of `M` shrinks it by `tol * step`: the same
/// per-step rule as a rank cut. Comparing with `‖A^k‖` instead goes wrong as
/// soon as a similarity makes the invertible part dominate every power.
fn first_vanishing(
    m: &DMatrix<Complex64>,
    x: &DMatrix<Complex64>,
    step: f64,
    scale: f64,
    tol: f64,
    dim: usize,
) -> (Option<usize>, Option<f64>) {
    let mut current = x.clone();
    let mut previous = norm(&current);
    if previous <= tol * scale.max(1.0) {
        return (Some(0), Some(previous));
    }
    for k in 1..=dim {
        current = m * current;
        let r = norm(&current);
        if r <= tol * step * previous {
            return (Some(k), Some(r));
        }
        previous = r;
    }
    (None, None)
}

/// Recomputes every residual for `S` as an inverse of `A`. Failures are
/// reported in `checks`, never as errors.
///
/// Residuals use the spectral norm and are compared relative to `‖A‖‖S‖`.
/// Both claims check `AS = SA`, `SAS = S`, that `S` has
/// `ascent = descent = dis <= 1`, and that `ASA` is the Drazin inverse of `S`.
/// A Drazin claim also needs a finite index equal to `dis(A)` and a nilpotent
/// core part of that degree.
pub fn verify_certificate(
    a: &ComplexMatrix,
    s: &ComplexMatrix,
    claim: Claim,
    cfg: &ToleranceConfig,
) -> Result<InverseCertificate, GzError> {
    let n = a.require_square()?;
    if s.rows() != n || s.cols() != n {
        return Err(GzError::Shape(format!("A is {n}x{n} but S is {}x{}", s.rows(), s.cols())));
    }
    let am = a.as_dmatrix();
    let sm = s.as_dmatrix();
    let norm_a = norm(am);
    let norm_s = norm(sm);
    let scale = norm_a * norm_s;
    let tol = cfg.residual_tol;

    let commutation = norm(&(am * sm - sm * am));
    let inner = norm(&(sm * am * sm - sm));

    let identity = DMatrix::<Complex64>::identity(n, n);
    let sa = sm * am;
    let (claimed_index, power_residual) = first_vanishing(am, &(&sa - &identity), norm_a, scale, tol, n);
    let q = &identity - am * sm;
    let core = am * &q;
    let (core_residual, _) = first_vanishing(&core, &q, norm_a, scale, tol, n);

    let dis_a = dis(a, cfg)?;
    let mut cert = InverseCertificate {
        inverse: s.clone(),
        claim,
        commutation_residual: commutation,
        inner_residual: inner,
        power_residual,
        core_residual,
        claimed_index,
        dis: dis_a,
        checks: Vec::new(),
    };

    cert.push_check(Check::within("commutation", rel(commutation, scale), tol));
    cert.push_check(Check::within("inner", rel(inner, scale), tol));

    let (p_s, q_s, d_s) = (ascent(s, cfg)?, descent(s, cfg)?, dis(s, cfg)?);
    let regular = p_s == q_s && q_s == d_s && d_s <= 1;
    cert.push_check(Check::new("inverse_regular", regular, d_s.max(p_s).max(q_s) as f64));

    let tst = ComplexMatrix::wrap(am * sm * am);
    match drazin_core(s, cfg) {
        Ok(ds) => {
            let diff = norm(&(tst.as_dmatrix() - ds.as_dmatrix()));
            let scale = norm(ds.as_dmatrix()).max(norm(tst.as_dmatrix())).max(1.0);
            cert.push_check(Check::within("tst_is_drazin_of_inverse", diff / scale, tol));
        }
        Err(_) => cert.push_check(Check::new("tst_is_drazin_of_inverse", false, f64::INFINITY)),
    }

    if claim == Claim::Drazin {
        // relative to ‖A^p‖, unless A^p itself vanishes by the step rule
        let power_rel = match (power_residual, claimed_index) {
            (Some(r), Some(0)) => rel(r, scale.max(1.0)),
            (Some(r), Some(k)) => {
                let before = norm(&crate::linalg::matrix_power(am, k as u32 - 1));
                let at = norm(&crate::linalg::matrix_power(am, k as u32));
                if at <= tol * norm_a * before {
                    rel(r, norm_a * before)
                } else {
                    rel(r, at)
                }
            }
            _ => f64::INFINITY,
        };
        cert.push_check(Check::within("power", power_rel, tol));
        cert.push_check(Check::new(
            "index_equals_dis",
            claimed_index == Some(dis_a),
            claimed_index.map_or(f64::INFINITY, |k| (k as f64 - dis_a as f64).abs()),
        ));
        cert.push_check(Check::new(
            "core_nilpotent_degree",
            core_residual.is_some() && core_residual == claimed_index,
            core_residual.map_or(f64::INFINITY, |k| k as f64),
        ));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn exact_pair_has_zero_residuals() {
        let a = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let s = ComplexMatrix::diag_real(&[0.5, 0.0]);
        let cert = verify_certificate(&a, &s, Claim::Drazin, &cfg()).unwrap();
        assert_eq!(cert.commutation_residual, 0.0);
        assert_eq!(cert.inner_residual, 0.0);
        assert_eq!(cert.claimed_index, Some(1));
        assert_eq!(dis(&s, &cfg()).unwrap(), 1);
        assert!(cert.passed(), "{:?}", cert.checks);
    }

    #[test]
    fn nilpotent_with_zero_inverse() {
        let a = ComplexMatrix::jordan_block(Complex64::new(0.0, 0.0), 2);
        let s = ComplexMatrix::zeros(2, 2);
        let cert = verify_certificate(&a, &s, Claim::Drazin, &cfg()).unwrap();
        assert_eq!(cert.commutation_residual, 0.0);
        assert_eq!(cert.inner_residual, 0.0);
        assert_eq!(cert.core_residual, Some(2));
        assert_eq!(cert.claimed_index, Some(2));
        assert!(cert.passed(), "{:?}", cert.checks);
    }

    #[test]
    fn corrupted_inverse_is_flagged() {
        let a = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let s = ComplexMatrix::diag_real(&[0.5, 0.1]);
        let cert = verify_certificate(&a, &s, Claim::Drazin, &cfg()).unwrap();
        assert!(cert.inner_residual > 0.0);
        let inner = cert.checks.iter().find(|c| c.name == "inner").unwrap();
        assert!(!inner.pass);
        assert!(!cert.passed());
    }

    #[test]
    fn invertible_has_index_zero() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 4.0]]).unwrap();
        let s = ComplexMatrix::from_real_rows(&[&[0.5, -0.125], &[0.0, 0.25]]).unwrap();
        let cert = verify_certificate(&a, &s, Claim::Drazin, &cfg()).unwrap();
        assert_eq!(cert.claimed_index, Some(0));
        assert_eq!(cert.core_residual, Some(0));
        assert!(cert.passed(), "{:?}", cert.checks);
    }

    #[test]
    fn shape_mismatch() {
        let a = ComplexMatrix::identity(2);
        let s = ComplexMatrix::identity(3);
        assert!(matches!(verify_certificate(&a, &s, Claim::Drazin, &cfg()), Err(GzError::Shape(_))));
    }
}
