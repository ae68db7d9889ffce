//! Pipelines behind the `gzspec` command line: analyze a point, build an
//! inverse for a spectral set, run verification suites, truncate a model.
//!
//! Every pipeline returns a serializable report. Field order is fixed by the
//! struct definitions and checks are sorted by name, so identical inputs give
//! identical bytes.

mod analyze;
mod cli;
mod inverse;
mod verify;

pub use analyze::{analyze, CertificateSummary, SpectralReport};
pub use cli::{run, Cli, Command};
pub use inverse::{inverse, InverseReport, InverseValue};
pub use verify::{verify, Suite, VerifyReport};

use std::path::Path;

use serde::Serialize;

use crate::exact::ExactComplex;
use crate::gz::{Check, EigenSelection};
use crate::linalg::{ComplexMatrix, ToleranceConfig};
use crate::operators::{truncate, Dim, OperatorError, OperatorModel};
use crate::spectral_sets::{SpectralSetSelection, SpectrumModel};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKS_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_INVALID_SPECTRAL_SET: i32 = 4;
pub const EXIT_RESIDUALS: i32 = 5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReportError {
    /// Unreadable or malformed input, or a bad flag value.
    #[error("{0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid spectral set: {0}")]
    InvalidSpectralSet(String),
    /// The numerical route gave up before a certificate could be formed.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl ReportError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Parse(_) => EXIT_PARSE,
            ReportError::Unsupported(_) => EXIT_UNSUPPORTED,
            ReportError::InvalidSpectralSet(_) => EXIT_INVALID_SPECTRAL_SET,
            ReportError::Numerical(_) => EXIT_RESIDUALS,
        }
    }

    /// Errors from point queries: bad models are parse errors, the rest are
    /// queries the model cannot answer.
    pub(crate) fn from_query(e: OperatorError) -> Self {
        match e {
            OperatorError::InvalidModel(m) => ReportError::Parse(m),
            OperatorError::InvalidSpectralSet(m) => ReportError::InvalidSpectralSet(m),
            other => ReportError::Unsupported(other.to_string()),
        }
    }
}

/// Reads an operator spec; the file stem becomes the operator id.
pub fn load_operator(path: &Path) -> Result<(OperatorModel, String), ReportError> {
    let text = std::fs::read_to_string(path).map_err(|e| ReportError::Parse(format!("{}: {e}", path.display())))?;
    let model =
        OperatorModel::from_json(&text).map_err(|e| ReportError::Parse(format!("{}: {e}", path.display())))?;
    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok((model, id))
}

pub fn parse_point(s: &str) -> Result<ExactComplex, ReportError> {
    s.parse().map_err(|e| ReportError::Parse(format!("point `{s}`: {e}")))
}

/// Dense form of a model when it acts on a finite-dimensional space and is
/// not a diagonal (diagonals keep their exact route).
pub(crate) fn matrix_form(m: &OperatorModel) -> Result<Option<ComplexMatrix>, ReportError> {
    match (m, m.dimension()) {
        (OperatorModel::FiniteMatrix(a), _) => Ok(Some(a.clone())),
        (OperatorModel::Diagonal(_), _) => Ok(None),
        (_, Dim::Finite(n)) if n > 0 => truncate(m, n as usize).map(Some).map_err(ReportError::from_query),
        _ => Ok(None),
    }
}

/// Selection of `σ` as read from a spectral-set file, before it is resolved
/// against an operator.
#[derive(Debug, Clone, PartialEq)]
pub enum SelectionInput {
    /// Anchors resolved against numerically computed eigenvalues.
    Eigen(EigenSelection),
    /// Exact points, clusters and boundary moves.
    Exact(SpectralSetSelection),
}

impl SelectionInput {
    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ReportError::Parse(format!("spectral set: {e}")))?;
        let obj = value.as_object().ok_or_else(|| ReportError::Parse("spectral set must be a JSON object".into()))?;
        const EXACT: [&str; 3] = ["selected_points", "selected_clusters", "boundary_moves"];
        if let Some(k) = obj.keys().find(|k| k.as_str() != "eigenvalues" && !EXACT.contains(&k.as_str())) {
            return Err(ReportError::Parse(format!("spectral set: unknown field `{k}`")));
        }
        let bad = |e: serde_json::Error| ReportError::Parse(format!("spectral set: {e}"));
        if obj.contains_key("eigenvalues") {
            if obj.len() > 1 {
                return Err(ReportError::Parse("spectral set: `eigenvalues` cannot be mixed with exact fields".into()));
            }
            return serde_json::from_value(value).map(SelectionInput::Eigen).map_err(bad);
        }
        serde_json::from_value(value).map(SelectionInput::Exact).map_err(bad)
    }

    pub(crate) fn eigen(&self) -> Result<EigenSelection, ReportError> {
        match self {
            SelectionInput::Eigen(e) => Ok(e.clone()),
            SelectionInput::Exact(s) if s.selected_clusters.is_empty() && s.boundary_moves.is_empty() => {
                Ok(EigenSelection::new(&s.selected_points.iter().map(ExactComplex::to_c64).collect::<Vec<_>>()))
            }
            SelectionInput::Exact(_) => {
                Err(ReportError::InvalidSpectralSet("matrix spectra have no clusters or boundary moves".into()))
            }
        }
    }

    pub(crate) fn exact(&self) -> Result<SpectralSetSelection, ReportError> {
        match self {
            SelectionInput::Exact(s) => Ok(s.clone()),
            SelectionInput::Eigen(e) => e
                .anchors()
                .map(|z| {
                    ExactComplex::from_c64(z)
                        .ok_or_else(|| ReportError::Parse(format!("eigenvalue anchor {z} is not finite")))
                })
                .collect::<Result<_, _>>()
                .map(|selected_points| SpectralSetSelection { selected_points, ..Default::default() }),
        }
    }
}

/// `σ` made of every cluster converging to 0 and the point 0 itself, when
/// that is a spectral set.
pub(crate) fn zero_selection(spec: &SpectrumModel) -> Option<SpectralSetSelection> {
    let zero = ExactComplex::zero();
    let mut sel = SpectralSetSelection::new();
    if spec.points().contains(&zero) {
        sel = sel.with_point(zero.clone());
    }
    for (i, c) in spec.clusters().iter().enumerate() {
        if c.limit() == &zero {
            sel = sel.with_cluster(i);
        }
    }
    match sel.is_spectral_set(spec) {
        Ok(true) => Some(sel),
        _ => None,
    }
}

pub(crate) fn prefixed(prefix: &str, checks: impl IntoIterator<Item = Check>) -> Vec<Check> {
    checks.into_iter().map(|c| Check { name: format!("{prefix}.{}", c.name), ..c }).collect()
}

pub(crate) fn sort_checks(checks: &mut [Check]) {
    checks.sort_by(|a, b| a.name.cmp(&b.name));
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
    s.push('\n');
    s
}

/// Tolerances in effect, echoed into every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// `default` or `strict`, before any flag overrides.
    pub profile: &'static str,
    #[serde(flatten)]
    pub config: ToleranceConfig,
}

impl Tolerances {
    pub fn profile(name: &str) -> Result<Self, ReportError> {
        let config = ToleranceConfig::profile(name).map_err(|e| ReportError::Parse(e.to_string()))?;
        let profile = if name.trim() == "strict" { "strict" } else { "default" };
        Ok(Self { profile, config })
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { profile: "default", config: ToleranceConfig::default() }
    }
}
