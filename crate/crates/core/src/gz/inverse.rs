use nalgebra::DMatrix;
use num::complex::Complex64;

use super::certificate::{verify_certificate, Check, Claim, InverseCertificate};
use super::contour::{contour_gz_inverse, riesz_projection, Contour};
use super::selection::{EigenSelection, SpectralSplit};
use super::{GzError, MAX_CONDITION};
use crate::linalg::{condition_number, matrix_norm, ComplexMatrix, ToleranceConfig};

/// A g_z-inverse together with everything used to build it.
#[derive(Debug, Clone)]
pub struct GzInverse {
    pub certificate: InverseCertificate,
    /// Riesz projection `P_σ`.
    pub projection: ComplexMatrix,
    /// Circles around `σ(A) \ σ`; empty when that set is.
    pub contours: Vec<Contour>,
    pub r: Complex64,
    pub second_r: Complex64,
    pub split: SpectralSplit,
}

/// Circle about the centroid of `points` that leaves every point of
/// `outside` outside, with a margin of `1e-3` radius on both sides.
fn circle_around(points: &[Complex64], outside: &[Complex64]) -> Option<Contour> {
    let center = points.iter().sum::<Complex64>() / points.len() as f64;
    let inner = points.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
    let outer = outside.iter().map(|z| (z - center).norm()).fold(f64::INFINITY, f64::min);
    let radius = 0.5 * (inner + outer);
    if !(radius > 0.0 && radius.is_finite()) || 0.5 * (outer - inner) < 1e-3 * radius {
        return None;
    }
    Contour::circle(center, radius).ok()
}

/// Circles enclosing `σ(A) \ σ` exactly once and leaving `σ` and 0 outside;
/// empty when `σ(A) \ σ` is. One circle about the centroid is tried first;
/// otherwise the complement is split into groups (single linkage at a
/// quarter of its distance to `σ ∪ {0}`) with one circle each.
pub fn separating_contours(split: &SpectralSplit) -> Result<Vec<Contour>, GzError> {
    let complement = &split.complement;
    if complement.is_empty() {
        return Ok(Vec::new());
    }
    let mut excluded = split.selected.clone();
    excluded.push(Complex64::new(0.0, 0.0));
    if let Some(c) = circle_around(complement, &excluded) {
        return Ok(vec![c]);
    }

    let gap = complement
        .iter()
        .flat_map(|z| excluded.iter().map(move |w| (z - w).norm()))
        .fold(f64::INFINITY, f64::min);
    let mut group: Vec<usize> = (0..complement.len()).collect();
    for i in 0..complement.len() {
        for j in 0..i {
            if (complement[i] - complement[j]).norm() <= 0.25 * gap {
                let (gi, gj) = (group[i], group[j]);
                group.iter_mut().filter(|g| **g == gi).for_each(|g| *g = gj);
            }
        }
    }
    let mut labels = group.clone();
    labels.sort_unstable();
    labels.dedup();
    labels
        .into_iter()
        .map(|label| {
            let (inside, rest): (Vec<_>, Vec<_>) =
                complement.iter().zip(&group).partition(|(_, g)| **g == label);
            let inside: Vec<Complex64> = inside.into_iter().map(|(z, _)| *z).collect();
            let outside: Vec<Complex64> = rest.into_iter().map(|(z, _)| *z).chain(excluded.iter().copied()).collect();
            circle_around(&inside, &outside).ok_or(GzError::NoSeparatingContour)
        })
        .collect()
}

/// `S = (A + r P_σ)^{-1} (I - P_σ)`, cross-checked against the contour formula
/// and against a second shift `2r`. `r` defaults to `2 (1 + max |λ| over σ)`.
pub fn gz_inverse_for_set(
    a: &ComplexMatrix,
    selection: &EigenSelection,
    r: Option<Complex64>,
    cfg: &ToleranceConfig,
) -> Result<GzInverse, GzError> {
    let n = a.require_square()?;
    let split = selection.split(a, cfg)?;
    let bound = split.selected_radius();
    let r = r.unwrap_or(Complex64::new(2.0 * (1.0 + bound), 0.0));
    if !(r.re.is_finite() && r.im.is_finite()) || r.norm() <= bound {
        return Err(GzError::ShiftTooSmall { r_abs: r.norm(), bound });
    }
    let second_r = 2.0 * r;
    let contours = separating_contours(&split)?;

    let identity = DMatrix::<Complex64>::identity(n, n);
    let projection = if split.selected.is_empty() {
        DMatrix::zeros(n, n)
    } else {
        let mut p = identity.clone();
        for c in &contours {
            p -= riesz_projection(a, c, cfg)?.as_dmatrix();
        }
        p
    };

    let algebraic = |shift: Complex64| -> Result<DMatrix<Complex64>, GzError> {
        let shifted = ComplexMatrix::wrap(a.as_dmatrix() + &projection * shift);
        let condition = condition_number(&shifted);
        if condition > MAX_CONDITION {
            return Err(GzError::IllConditioned { condition });
        }
        let lu = shifted.into_dmatrix().lu();
        lu.solve(&(&identity - &projection)).ok_or(GzError::IllConditioned { condition })
    };
    let s = algebraic(r)?;
    let s2 = algebraic(second_r)?;
    let mut by_contour = DMatrix::zeros(n, n);
    for c in &contours {
        by_contour += contour_gz_inverse(a, c, cfg)?.as_dmatrix();
    }

    let claim = if split.selected.len() == split.zero_multiplicity { Claim::Drazin } else { Claim::GzInverse };
    let inverse = ComplexMatrix::wrap(s);
    let mut certificate = verify_certificate(a, &inverse, claim, cfg)?;
    let scale = matrix_norm(inverse.as_dmatrix()).max(1.0);
    let tol = cfg.residual_tol;
    certificate.push_check(Check::within(
        "contour_route_agreement",
        matrix_norm(&(inverse.as_dmatrix() - &by_contour)) / scale,
        tol,
    ));
    certificate.push_check(Check::within("shift_independence", matrix_norm(&(inverse.as_dmatrix() - &s2)) / scale, tol));
    let p_scale = matrix_norm(&projection).max(1.0);
    certificate.push_check(Check::within(
        "projection_idempotent",
        matrix_norm(&(&projection * &projection - &projection)) / p_scale,
        tol,
    ));
    certificate.push_check(Check::within(
        "projection_commutes",
        matrix_norm(&(a.as_dmatrix() * &projection - &projection * a.as_dmatrix())) / (p_scale * a.norm2().max(1.0)),
        tol,
    ));

    Ok(GzInverse { certificate, projection: ComplexMatrix::wrap(projection), contours, r, second_r, split })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gz::drazin_inverse;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a.as_dmatrix() - b.as_dmatrix()).norm() < tol
    }

    #[test]
    fn zero_cluster_gives_drazin() {
        let a = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let g = gz_inverse_for_set(&a, &EigenSelection::zero_cluster(), Some(c(1.0)), &cfg()).unwrap();
        assert!(close(&g.certificate.inverse, &ComplexMatrix::diag_real(&[0.5, 0.0]), 1e-10));
        let d = drazin_inverse(&a, &cfg()).unwrap();
        assert!(close(&g.certificate.inverse, &d.inverse, 1e-10));
        assert_eq!(g.certificate.claim, Claim::Drazin);
        assert!(g.certificate.passed(), "{:?}", g.certificate.checks);
    }

    #[test]
    fn empty_selection_inverts() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let g = gz_inverse_for_set(&a, &EigenSelection::empty(), None, &cfg()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[-1.0, 2.0]]).unwrap();
        assert!(close(&g.certificate.inverse, &expected, 1e-10));
        assert!(g.certificate.passed(), "{:?}", g.certificate.checks);
    }

    #[test]
    fn harmonic_tail_selection() {
        let a = ComplexMatrix::diag_real(&[1.0, 0.5, 1.0 / 3.0, 0.25]);
        let g = gz_inverse_for_set(&a, &EigenSelection::new(&[c(1.0 / 3.0), c(0.25)]), None, &cfg()).unwrap();
        assert!(close(&g.certificate.inverse, &ComplexMatrix::diag_real(&[1.0, 2.0, 0.0, 0.0]), 1e-9));
        assert_eq!(g.certificate.claim, Claim::GzInverse);
        assert!(g.certificate.passed(), "{:?}", g.certificate.checks);
    }

    #[test]
    fn small_shift_rejected() {
        let a = ComplexMatrix::diag_real(&[1.0, 0.5, 0.25]);
        let err = gz_inverse_for_set(&a, &EigenSelection::new(&[c(0.25)]), Some(c(0.2)), &cfg()).unwrap_err();
        assert!(matches!(err, GzError::ShiftTooSmall { .. }));
    }

    #[test]
    fn interleaved_spectra_use_one_circle_per_group() {
        // σ = {1}, complement {0.5, 1.5}: any single circle around both catches 1
        let a = ComplexMatrix::diag_real(&[0.5, 1.0, 1.5]);
        let g = gz_inverse_for_set(&a, &EigenSelection::new(&[c(1.0)]), None, &cfg()).unwrap();
        assert_eq!(g.contours.len(), 2);
        assert!(close(&g.certificate.inverse, &ComplexMatrix::diag_real(&[2.0, 0.0, 1.0 / 1.5]), 1e-9));
        assert!(g.certificate.passed(), "{:?}", g.certificate.checks);
    }

    #[test]
    fn complement_on_both_sides_of_zero() {
        let a = ComplexMatrix::jordan_block(c(0.0), 2).direct_sum(&ComplexMatrix::diag_real(&[2.0, -1.0]));
        let g = gz_inverse_for_set(&a, &EigenSelection::zero_cluster(), None, &cfg()).unwrap();
        assert_eq!(g.contours.len(), 2);
        assert!(g.certificate.passed(), "{:?}", g.certificate.checks);
    }
}
