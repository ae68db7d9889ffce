use nalgebra::DMatrix;
use num::complex::Complex64;

use super::certificate::{verify_certificate, Claim, InverseCertificate};
use super::{GzError, MAX_CONDITION};
use crate::linalg::{condition_number, core_nilpotent_split, ComplexMatrix, ToleranceConfig};

/// Core-nilpotent route: with `q` the index, write `x = U y + V z` for bases
/// `U` of `R(A^q)` and `V` of `N(A^q)`; then `S x = U (U* A U)^{-1} y`.
pub(crate) fn drazin_core(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix, GzError> {
    let n = a.require_square()?;
    let (_, core, nil) = core_nilpotent_split(a, cfg)?;
    let r = core.dim();
    if r == 0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let u = core.matrix();
    let block = ComplexMatrix::wrap(u.adjoint() * a.as_dmatrix() * u);
    let condition = condition_number(&block);
    if condition > MAX_CONDITION {
        return Err(GzError::IllConditioned { condition });
    }
    let block_inv = block.into_dmatrix().lu().try_inverse().ok_or(GzError::IllConditioned { condition })?;

    let coords = if r == n {
        u.adjoint()
    } else {
        let mut w = DMatrix::<Complex64>::zeros(n, n);
        w.columns_mut(0, r).copy_from(u);
        w.columns_mut(r, n - r).copy_from(nil.matrix());
        let w = ComplexMatrix::wrap(w);
        let condition = condition_number(&w);
        if condition > MAX_CONDITION {
            return Err(GzError::IllConditioned { condition });
        }
        let inv = w.into_dmatrix().lu().try_inverse().ok_or(GzError::IllConditioned { condition })?;
        inv.rows(0, r).into_owned()
    };
    Ok(ComplexMatrix::wrap(u * block_inv * coords))
}

/// Drazin inverse with its certificate. The certificate may report failed
/// checks; only shape and conditioning problems are errors.
pub fn drazin_inverse(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<InverseCertificate, GzError> {
    let s = drazin_core(a, cfg)?;
    verify_certificate(a, &s, Claim::Drazin, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
        (a.as_dmatrix() - b.as_dmatrix()).norm() < 1e-12
    }

    #[test]
    fn diagonal_example() {
        let cert = drazin_inverse(&ComplexMatrix::diag_real(&[2.0, 0.0]), &cfg()).unwrap();
        assert!(close(&cert.inverse, &ComplexMatrix::diag_real(&[0.5, 0.0])));
        assert_eq!(cert.claimed_index, Some(1));
        assert!(cert.passed(), "{:?}", cert.checks);
    }

    #[test]
    fn nilpotent_example() {
        let j3 = ComplexMatrix::jordan_block(Complex64::new(0.0, 0.0), 3);
        let cert = drazin_inverse(&j3, &cfg()).unwrap();
        assert!(close(&cert.inverse, &ComplexMatrix::zeros(3, 3)));
        assert_eq!(cert.claimed_index, Some(3));
        assert_eq!(cert.dis, 3);
        assert!(cert.passed(), "{:?}", cert.checks);
    }

    #[test]
    fn jordan_plus_invertible_block() {
        let a = ComplexMatrix::jordan_block(Complex64::new(0.0, 0.0), 2).direct_sum(&ComplexMatrix::diag_real(&[5.0]));
        let cert = drazin_inverse(&a, &cfg()).unwrap();
        let expected = ComplexMatrix::zeros(2, 2).direct_sum(&ComplexMatrix::diag_real(&[0.2]));
        assert!(close(&cert.inverse, &expected));
        assert_eq!(cert.claimed_index, Some(2));
        assert!(cert.passed(), "{:?}", cert.checks);
    }

    #[test]
    fn invertible_gives_inverse() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let cert = drazin_inverse(&a, &cfg()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[-1.0, 2.0]]).unwrap();
        assert!(close(&cert.inverse, &expected));
        assert_eq!(cert.claimed_index, Some(0));
    }

    #[test]
    fn non_orthogonal_core_split() {
        // A = [[1, 1], [0, 0]]: R(A) = span e1, N(A) = span (1, -1); S = A.
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
        let cert = drazin_inverse(&a, &cfg()).unwrap();
        assert!(close(&cert.inverse, &a));
        assert!(cert.passed(), "{:?}", cert.checks);
    }
}
