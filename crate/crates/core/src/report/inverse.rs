use num::complex::Complex64;
use serde::Serialize;

use super::analyze::CertificateSummary;
use super::{matrix_form, sort_checks, ReportError, SelectionInput, Tolerances, TOOL_VERSION};
use crate::gz::{gz_inverse_for_set, Check, GzError};
use crate::linalg::ComplexMatrix;
use crate::operators::{gz_inverse_diagonal, DiagonalModel, OperatorError, OperatorModel};
use crate::spectral_sets::{SpectralError, SpectrumModel};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum InverseValue {
    Matrix { matrix: ComplexMatrix },
    Diagonal { diagonal: DiagonalModel, spectrum: SpectrumModel, expected_spectrum: SpectrumModel },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseReport {
    pub kind: &'static str,
    pub tool_version: &'static str,
    pub operator_id: String,
    /// Shift used by the algebraic route; exact diagonal inverses need none.
    pub r: Option<[f64; 2]>,
    pub inverse: InverseValue,
    pub certificate: CertificateSummary,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub tolerances: Tolerances,
}

fn gz_error(e: GzError) -> ReportError {
    match e {
        GzError::InvalidSpectralSplit(_) | GzError::NoSeparatingContour => ReportError::InvalidSpectralSet(e.to_string()),
        GzError::ShiftTooSmall { .. } => ReportError::Parse(format!("--r: {e}")),
        GzError::Shape(_) => ReportError::Parse(e.to_string()),
        other => ReportError::Numerical(other.to_string()),
    }
}

fn operator_error(e: OperatorError) -> ReportError {
    match e {
        OperatorError::InvalidSpectralSet(_)
        | OperatorError::Spectral(SpectralError::MalformedSelection(_) | SpectralError::InvalidSpectralSet(_)) => {
            ReportError::InvalidSpectralSet(e.to_string())
        }
        other => ReportError::from_query(other),
    }
}

/// `T^D_σ = (T + r P_σ)^{-1} (I - P_σ)` with its certificate. A report is
/// returned even when residuals fail; callers decide the exit code from
/// `passed`.
pub fn inverse(
    model: &OperatorModel,
    operator_id: &str,
    selection: &SelectionInput,
    r: Option<Complex64>,
    tol: &Tolerances,
) -> Result<InverseReport, ReportError> {
    let cfg = &tol.config;
    let (inverse, certificate, mut checks, r) = if let Some(a) = matrix_form(model)? {
        let g = gz_inverse_for_set(&a, &selection.eigen()?, r, cfg).map_err(gz_error)?;
        let summary = CertificateSummary::from_matrix(&g.certificate);
        let matrix = g.certificate.inverse;
        (InverseValue::Matrix { matrix }, summary, g.certificate.checks, Some([g.r.re, g.r.im]))
    } else if let OperatorModel::Diagonal(_) = model {
        let g = gz_inverse_diagonal(model, &selection.exact()?).map_err(operator_error)?;
        let summary = CertificateSummary::from_diagonal(&g.certificate);
        let value = InverseValue::Diagonal {
            diagonal: g.inverse,
            spectrum: g.spectrum,
            expected_spectrum: g.expected_spectrum,
        };
        (value, summary, g.certificate.checks, None)
    } else {
        return Err(ReportError::Unsupported(
            "g_z-inverses are built for matrices and diagonal models only".into(),
        ));
    };
    sort_checks(&mut checks);
    let passed = checks.iter().all(|c| c.pass);
    Ok(InverseReport {
        kind: "inverse",
        tool_version: TOOL_VERSION,
        operator_id: operator_id.to_string(),
        r,
        inverse,
        certificate,
        checks,
        passed,
        tolerances: *tol,
    })
}
