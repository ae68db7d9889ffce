use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::model::{DiagonalModel, DiagonalPerturbation, OperatorModel, Weights};
use super::OperatorError;
use crate::exact::{serde_rational, ExactComplex, Rational};
use crate::gz::eigen_clusters;
use crate::linalg::{ComplexMatrix, ToleranceConfig};
use crate::spectral_sets::{SpectralClass, SpectrumModel};

/// Closed disk `|z - center| <= sqrt(radius_squared)`. Opaque: membership
/// is decided exactly, accumulation structure is not enumerated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disk {
    pub center: ExactComplex,
    #[serde(with = "serde_rational")]
    pub radius_squared: Rational,
}

impl Disk {
    fn distance_squared(&self, z: &ExactComplex) -> Rational {
        (z - &self.center).norm_sqr()
    }

    pub fn contains(&self, z: &ExactComplex) -> bool {
        self.distance_squared(z) <= self.radius_squared
    }

    pub fn on_boundary(&self, z: &ExactComplex) -> bool {
        self.distance_squared(z) == self.radius_squared
    }
}

/// A countable closed set together with finitely many disks.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OperatorSpectrum {
    #[serde(flatten)]
    pub countable: SpectrumModel,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub disks: Vec<Disk>,
}

impl OperatorSpectrum {
    pub fn countable(model: SpectrumModel) -> Self {
        Self { countable: model, disks: Vec::new() }
    }

    pub fn contains(&self, z: &ExactComplex) -> bool {
        self.disks.iter().any(|d| d.contains(z)) || self.countable.contains(z)
    }

    /// The countable part, or an error when a disk is present.
    pub fn as_countable(&self) -> Result<&SpectrumModel, OperatorError> {
        if self.disks.is_empty() {
            Ok(&self.countable)
        } else {
            Err(OperatorError::UnsupportedSpectralShape("the spectrum contains a disk".into()))
        }
    }

    /// `acc σ ⊆ {0}`. A disk of positive radius is never zeroloid.
    pub fn is_zeroloid(&self) -> bool {
        self.disks.is_empty() && self.countable.is_zeroloid()
    }

    /// Tier of `z`. Disks answer only at their center, on their boundary and
    /// outside; other interior points are rejected.
    pub fn tier_at(&self, z: &ExactComplex) -> Result<SpectralClass, OperatorError> {
        for d in &self.disks {
            if d.on_boundary(z) || *z == d.center {
                return Ok(SpectralClass::NotGzInvertible);
            }
            if d.contains(z) {
                return Err(OperatorError::UnsupportedSpectralShape(format!(
                    "{z} lies inside a disk spectrum away from its center"
                )));
            }
        }
        Ok(self.countable.classify_at(z))
    }

    fn union(&self, other: &Self) -> Result<Self, OperatorError> {
        let mut disks = self.disks.clone();
        disks.extend(other.disks.iter().cloned());
        Ok(Self { countable: self.countable.union(&other.countable)?, disks })
    }
}

/// Exact spectrum of a model. Matrix spectra are the numerically computed
/// eigenvalues rounded to 40 significant bits, with the cluster at 0 set to 0.
pub fn spectrum(m: &OperatorModel, cfg: &ToleranceConfig) -> Result<OperatorSpectrum, OperatorError> {
    Ok(match m {
        OperatorModel::FiniteMatrix(a) => OperatorSpectrum::countable(matrix_spectrum(a, cfg)?),
        OperatorModel::Diagonal(d) => OperatorSpectrum::countable(d.value_set()),
        OperatorModel::DiagonalPerturbation(p) => OperatorSpectrum::countable(perturbed_spectrum(p)),
        OperatorModel::WeightedShift(s) => match &s.weights {
            Weights::Constant { value, .. } => OperatorSpectrum {
                countable: SpectrumModel::empty(),
                disks: vec![Disk { center: ExactComplex::zero(), radius_squared: value * value }],
            },
            Weights::Null { .. } => OperatorSpectrum::countable(SpectrumModel::from_points([ExactComplex::zero()])),
        },
        OperatorModel::DirectSum(parts) => {
            let mut acc = OperatorSpectrum::default();
            for p in parts {
                acc = acc.union(&spectrum(p, cfg)?)?;
            }
            acc
        }
        OperatorModel::Affine { model, a, b } => {
            let inner = spectrum(model, cfg)?;
            let scale = a.norm_sqr();
            OperatorSpectrum {
                countable: inner.countable.affine_image(a, b),
                disks: inner
                    .disks
                    .iter()
                    .map(|d| Disk { center: a * &d.center + b, radius_squared: &d.radius_squared * &scale })
                    .collect(),
            }
        }
        OperatorModel::Power { model, exponent } => {
            let inner = spectrum(model, cfg)?;
            let mut disks = Vec::with_capacity(inner.disks.len());
            for d in &inner.disks {
                if !d.center.is_zero() {
                    return Err(OperatorError::UnsupportedSpectralShape(
                        "power of a disk not centered at 0".into(),
                    ));
                }
                disks.push(Disk { center: ExactComplex::zero(), radius_squared: num::pow(d.radius_squared.clone(), *exponent as usize) });
            }
            OperatorSpectrum { countable: inner.countable.power_image(*exponent)?, disks }
        }
    })
}

fn matrix_spectrum(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<SpectrumModel, OperatorError> {
    let clusters = eigen_clusters(a, cfg).map_err(|e| match e {
        crate::gz::GzError::Linalg(l) => OperatorError::Linalg(l),
        other => OperatorError::InvalidModel(other.to_string()),
    })?;
    let mut points = Vec::with_capacity(clusters.len());
    for c in clusters {
        if c.is_zero {
            points.push(ExactComplex::zero());
            continue;
        }
        let mean = c.values.iter().sum::<num::complex::Complex64>() / c.values.len() as f64;
        let snapped = num::complex::Complex64::new(snap(mean.re), snap(mean.im));
        points.push(ExactComplex::from_c64(snapped).ok_or(crate::linalg::LinalgError::NonFinite)?);
    }
    Ok(SpectrumModel::from_points(points))
}

/// Rounds to 40 significant bits so that exact binary values survive and
/// rounding noise does not.
fn snap(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let shift = 40 - x.abs().log2().ceil() as i32;
    let s = 2f64.powi(shift);
    (x * s).round() / s
}

/// Base spectrum with the values whose last entry was edited away removed
/// (unless they are accumulation points), plus the new values.
pub(crate) fn perturbed_spectrum(p: &DiagonalPerturbation) -> SpectrumModel {
    let base = p.base().value_set();
    let olds: BTreeSet<ExactComplex> = p.edits().values().map(|(o, _)| o.clone()).collect();
    let holes: BTreeSet<ExactComplex> =
        olds.into_iter().filter(|v| p.count(v).is_zero() && !base.acc_contains(v)).collect();
    excise(p.base(), &base, &holes).union(&SpectrumModel::from_points(p.edits().values().map(|(_, n)| n.clone())))
        .expect("union of depth-2 models stays within depth 2")
}

fn excise(d: &DiagonalModel, base: &SpectrumModel, holes: &BTreeSet<ExactComplex>) -> SpectrumModel {
    if holes.is_empty() {
        return base.clone();
    }
    let mut points: Vec<ExactComplex> =
        d.points().iter().map(|(v, _)| v.clone()).filter(|v| !holes.contains(v)).collect();
    let mut clusters = Vec::new();
    for c in d.clusters() {
        let (p, cs) = c.excise(holes);
        points.extend(p);
        clusters.extend(cs);
    }
    SpectrumModel::new(points, clusters)
}
