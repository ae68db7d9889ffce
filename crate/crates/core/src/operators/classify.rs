use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use super::local::local;
use super::model::{OperatorModel, Weights};
use super::spectrum::{perturbed_spectrum, OperatorSpectrum};
use super::{Dim, OperatorError};
use crate::exact::ExactComplex;
use crate::linalg::ToleranceConfig;
use crate::spectral_sets::SpectralClass;

/// Kernel and cokernel data of `T - λ`.
///
/// `beta` is the codimension of the closure of the range, i.e. `α(T* - λ̄)`;
/// it equals the algebraic codimension only when `closed_range` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointData {
    pub alpha: Dim,
    pub beta: Dim,
    pub closed_range: bool,
    pub isolated: bool,
    pub in_spectrum: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Index {
    Finite(i64),
    PlusInfinity,
    MinusInfinity,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(k) => write!(f, "{k}"),
            Index::PlusInfinity => write!(f, "+infinite"),
            Index::MinusInfinity => write!(f, "-infinite"),
        }
    }
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Index::Finite(k) => s.serialize_i64(*k),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// Strongest invertibility notion that holds at a point, strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorClass {
    Invertible,
    Browder,
    Drazin,
    GeneralizedDrazin,
    GzInvertible,
    None,
}

impl OperatorClass {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorClass::Invertible => "invertible",
            OperatorClass::Browder => "browder",
            OperatorClass::Drazin => "drazin",
            OperatorClass::GeneralizedDrazin => "generalized_drazin",
            OperatorClass::GzInvertible => "gz_invertible",
            OperatorClass::None => "none",
        }
    }

    /// At least g_z-invertible.
    pub fn is_gz(self) -> bool {
        self != OperatorClass::None
    }
}

/// Position of `λ` relative to `σ`, `acc σ` and `acc acc σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralTiers {
    pub in_spectrum: bool,
    pub in_acc: bool,
    pub in_acc_acc: bool,
}

impl SpectralTiers {
    fn from_class(c: SpectralClass) -> Self {
        let (a, b, d) = match c {
            SpectralClass::Invertible => (false, false, false),
            SpectralClass::GeneralizedDrazin => (true, false, false),
            SpectralClass::GzInvertible => (true, true, false),
            SpectralClass::NotGzInvertible => (true, true, true),
        };
        Self { in_spectrum: a, in_acc: b, in_acc_acc: d }
    }

    fn or(self, o: Self) -> Self {
        Self {
            in_spectrum: self.in_spectrum || o.in_spectrum,
            in_acc: self.in_acc || o.in_acc,
            in_acc_acc: self.in_acc_acc || o.in_acc_acc,
        }
    }
}

/// One-sided invertibility of `T - λ` (bounded below / onto).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneSided {
    pub left_invertible: bool,
    pub right_invertible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: OperatorClass,
    pub tiers: SpectralTiers,
    /// Present whenever kernel and cokernel data are available at the point.
    pub one_sided: Option<OneSided>,
}

pub fn point_data(m: &OperatorModel, lambda: &ExactComplex, cfg: &ToleranceConfig) -> Result<PointData, OperatorError> {
    let l = local(m, 1, lambda, cfg)?;
    Ok(PointData {
        alpha: l.alpha,
        beta: l.beta,
        closed_range: l.closed_range,
        isolated: l.isolated,
        in_spectrum: l.in_spectrum,
    })
}

/// `α - β` where `T - λ` is semi-Fredholm.
pub fn index(m: &OperatorModel, lambda: &ExactComplex, cfg: &ToleranceConfig) -> Result<Index, OperatorError> {
    let p = point_data(m, lambda, cfg)?;
    if !p.closed_range {
        return Err(OperatorError::NotSemiFredholm(format!("the range of T - {lambda} is not closed")));
    }
    match (p.alpha, p.beta) {
        (Dim::Finite(a), Dim::Finite(b)) => Ok(Index::Finite(a as i64 - b as i64)),
        (Dim::Infinite, Dim::Finite(_)) => Ok(Index::PlusInfinity),
        (Dim::Finite(_), Dim::Infinite) => Ok(Index::MinusInfinity),
        (Dim::Infinite, Dim::Infinite) => {
            Err(OperatorError::NotSemiFredholm("kernel and cokernel are both infinite".into()))
        }
    }
}

pub fn spectral_tiers(m: &OperatorModel, lambda: &ExactComplex, cfg: &ToleranceConfig) -> Result<SpectralTiers, OperatorError> {
    let from_spectrum = |s: OperatorSpectrum| s.tier_at(lambda).map(SpectralTiers::from_class);
    match m {
        OperatorModel::FiniteMatrix(_) => {
            let l = local(m, 1, lambda, cfg)?;
            Ok(SpectralTiers { in_spectrum: l.in_spectrum, in_acc: false, in_acc_acc: false })
        }
        OperatorModel::Diagonal(d) => from_spectrum(OperatorSpectrum::countable(d.value_set())),
        OperatorModel::DiagonalPerturbation(p) => from_spectrum(OperatorSpectrum::countable(perturbed_spectrum(p))),
        OperatorModel::WeightedShift(s) => match s.weights {
            Weights::Null { .. } => Ok(SpectralTiers::from_class(if lambda.is_zero() {
                SpectralClass::GeneralizedDrazin
            } else {
                SpectralClass::Invertible
            })),
            Weights::Constant { .. } => from_spectrum(super::spectrum(m, cfg)?),
        },
        OperatorModel::DirectSum(parts) => {
            let mut t = SpectralTiers::from_class(SpectralClass::Invertible);
            for p in parts {
                t = t.or(spectral_tiers(p, lambda, cfg)?);
            }
            Ok(t)
        }
        OperatorModel::Affine { model, a, b } => {
            let inv = a.recip().ok_or_else(|| OperatorError::InvalidModel("affine coefficient a must be nonzero".into()))?;
            spectral_tiers(model, &((lambda - b) * inv), cfg)
        }
        OperatorModel::Power { model, .. } => {
            // z -> z^n is open and finite-to-one, and only 0 maps to 0
            if !lambda.is_zero() {
                return Err(OperatorError::UnsupportedSpectralShape("powers are only resolved at 0".into()));
            }
            spectral_tiers(model, lambda, cfg)
        }
    }
}

/// Strongest class at `λ`: the spectral tiers decide between invertible,
/// isolated, g_z-invertible and none; at an isolated point a pole of the
/// resolvent gives Drazin, and Browder when the kernel is also finite.
pub fn classify(m: &OperatorModel, lambda: &ExactComplex, cfg: &ToleranceConfig) -> Result<Classification, OperatorError> {
    let tiers = spectral_tiers(m, lambda, cfg)?;
    let data = local(m, 1, lambda, cfg);
    let class = if !tiers.in_spectrum {
        OperatorClass::Invertible
    } else if !tiers.in_acc {
        let l = data.clone()?;
        match (l.pole, l.alpha.is_finite()) {
            (true, true) => OperatorClass::Browder,
            (true, false) => OperatorClass::Drazin,
            (false, _) => OperatorClass::GeneralizedDrazin,
        }
    } else if !tiers.in_acc_acc {
        OperatorClass::GzInvertible
    } else {
        OperatorClass::None
    };
    let one_sided = data.ok().map(|l| OneSided {
        left_invertible: l.closed_range && l.alpha.is_zero(),
        right_invertible: l.closed_range && l.beta.is_zero(),
    });
    Ok(Classification { class, tiers, one_sided })
}
