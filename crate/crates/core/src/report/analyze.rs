use serde::Serialize;

use super::{matrix_form, prefixed, sort_checks, zero_selection, ReportError, Tolerances, TOOL_VERSION};
use crate::exact::ExactComplex;
use crate::gz::{drazin_inverse, Check, InverseCertificate};
use crate::linalg::ComplexMatrix;
use crate::operators::{
    adjoint_model, classify, gz_inverse_diagonal, index, point_data, DiagonalCertificate, Index, OneSided,
    OperatorClass, OperatorModel, PointData, SpectralTiers,
};

/// Summary of an inverse certificate: residuals and the failed check names,
/// without the inverse itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateSummary {
    /// `drazin`, `gz_inverse` or `gz_inverse_diagonal`.
    pub claim: String,
    pub passed: bool,
    pub commutation_residual: Option<f64>,
    pub inner_residual: Option<f64>,
    pub power_residual: Option<f64>,
    pub claimed_index: Option<usize>,
    pub core_residual: Option<usize>,
    pub dis: Option<usize>,
    pub sampled_entries: Option<usize>,
    pub failed_checks: Vec<String>,
}

impl CertificateSummary {
    pub fn from_matrix(c: &InverseCertificate) -> Self {
        let claim = serde_json::to_value(c.claim).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        Self {
            claim,
            passed: c.passed(),
            commutation_residual: Some(c.commutation_residual),
            inner_residual: Some(c.inner_residual),
            power_residual: c.power_residual,
            claimed_index: c.claimed_index,
            core_residual: c.core_residual,
            dis: Some(c.dis),
            sampled_entries: None,
            failed_checks: c.failures().map(|f| f.name.clone()).collect(),
        }
    }

    pub fn from_diagonal(c: &DiagonalCertificate) -> Self {
        Self {
            claim: "gz_inverse_diagonal".into(),
            passed: c.passed(),
            commutation_residual: None,
            inner_residual: None,
            power_residual: None,
            claimed_index: None,
            core_residual: None,
            dis: None,
            sampled_entries: Some(c.sampled_entries),
            failed_checks: c.checks.iter().filter(|k| !k.pass).map(|k| k.name.clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub kind: &'static str,
    pub tool_version: &'static str,
    pub operator_id: String,
    pub point: ExactComplex,
    pub classification: OperatorClass,
    pub spectral_tiers: SpectralTiers,
    pub one_sided: Option<OneSided>,
    /// Absent where kernel data is not defined (e.g. on a disk boundary).
    pub point_data: Option<PointData>,
    /// Absent unless `T - λ` is semi-Fredholm.
    pub index: Option<Index>,
    pub certificates: Vec<CertificateSummary>,
    pub checks: Vec<Check>,
    pub tolerances: Tolerances,
}

impl SpectralReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.certificates.iter().all(|c| c.passed)
    }
}

fn tiers_match(class: OperatorClass, t: SpectralTiers) -> bool {
    match class {
        OperatorClass::Invertible => !t.in_spectrum,
        OperatorClass::Browder | OperatorClass::Drazin | OperatorClass::GeneralizedDrazin => {
            t.in_spectrum && !t.in_acc
        }
        OperatorClass::GzInvertible => t.in_acc && !t.in_acc_acc,
        OperatorClass::None => t.in_acc_acc,
    }
}

fn negate(i: Index) -> Index {
    match i {
        Index::Finite(k) => Index::Finite(-k),
        Index::PlusInfinity => Index::MinusInfinity,
        Index::MinusInfinity => Index::PlusInfinity,
    }
}

/// Classifies `T - λ` and attaches whatever certificates the model supports
/// at that point.
pub fn analyze(
    model: &OperatorModel,
    operator_id: &str,
    point: &ExactComplex,
    tol: &Tolerances,
) -> Result<SpectralReport, ReportError> {
    let cfg = &tol.config;
    let c = classify(model, point, cfg).map_err(ReportError::from_query)?;
    let data = point_data(model, point, cfg).ok();
    let ind = index(model, point, cfg).ok();

    let mut checks = vec![Check::new("classification_matches_tiers", tiers_match(c.class, c.tiers), 0.0)];
    if let Some(d) = data {
        let ok = d.in_spectrum == c.tiers.in_spectrum;
        checks.push(Check::new("point_data_matches_tiers", ok, if ok { 0.0 } else { 1.0 }));
    }
    if let Some(i) = ind {
        let dual = index(&adjoint_model(model), &point.conj(), cfg).ok();
        let ok = dual == Some(negate(i));
        checks.push(Check::new("index_adjoint_duality", ok, if ok { 0.0 } else { 1.0 }));
    }

    let mut certificates = Vec::new();
    if c.tiers.in_spectrum && c.class.is_gz() {
        if let Some(a) = matrix_form(model)? {
            let shifted = a
                .sub(&ComplexMatrix::identity(a.rows()).scale(point.to_c64()))
                .map_err(|e| ReportError::Parse(e.to_string()))?;
            match drazin_inverse(&shifted, cfg) {
                Ok(cert) => certificates.push(CertificateSummary::from_matrix(&cert)),
                Err(_) => checks.push(Check::new("drazin_certificate", false, f64::NAN)),
            }
        } else if let (OperatorModel::Diagonal(d), true) = (model, point.is_zero()) {
            if let Some(sel) = zero_selection(&d.value_set()) {
                let g = gz_inverse_diagonal(model, &sel).map_err(ReportError::from_query)?;
                checks.extend(prefixed("gz_inverse_diagonal", g.certificate.checks.iter().cloned()));
                certificates.push(CertificateSummary::from_diagonal(&g.certificate));
            }
        }
    }
    sort_checks(&mut checks);

    Ok(SpectralReport {
        kind: "analyze",
        tool_version: TOOL_VERSION,
        operator_id: operator_id.to_string(),
        point: point.clone(),
        classification: c.class,
        spectral_tiers: c.tiers,
        one_sided: c.one_sided,
        point_data: data,
        index: ind,
        certificates,
        checks,
        tolerances: *tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{DiagonalModel, WeightedShift};

    fn at(m: &OperatorModel, p: &str) -> Result<SpectralReport, ReportError> {
        analyze(m, "t", &p.parse().unwrap(), &Tolerances::default())
    }

    #[test]
    fn harmonic_at_zero_is_gz() {
        let m = OperatorModel::Diagonal(DiagonalModel::harmonic());
        let r = at(&m, "0").unwrap();
        assert_eq!(r.classification, OperatorClass::GzInvertible);
        assert!(r.spectral_tiers.in_acc && !r.spectral_tiers.in_acc_acc);
        assert_eq!(r.certificates.len(), 1);
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn matrix_pole_gets_drazin_certificate() {
        let m = OperatorModel::FiniteMatrix(ComplexMatrix::diag_real(&[2.0, 0.0]));
        let r = at(&m, "0").unwrap();
        assert_eq!(r.classification, OperatorClass::Browder);
        assert_eq!(r.certificates[0].claim, "drazin");
        assert_eq!(r.index, Some(Index::Finite(0)));
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn disk_interior_is_unsupported() {
        let m = OperatorModel::WeightedShift(WeightedShift::left());
        assert!(matches!(at(&m, "0.5"), Err(ReportError::Unsupported(_))));
        let r = at(&m, "0").unwrap();
        assert_eq!(r.index, Some(Index::Finite(1)));
        assert!(r.passed());
    }
}
