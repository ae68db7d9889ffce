//! Operator spec JSON.
//!
//! ```json
//! {"variant": "diagonal", "points": [["5","0"]], "multiplicities": ["infinite"], "clusters": [...]}
//! {"variant": "shift", "direction": "left", "weights": {"kind": "constant", "value": "1", "prefix": ["1/2"]}}
//! {"variant": "shift", "direction": "right", "weights": {"kind": "null", "decay": "1/n"}}
//! {"variant": "matrix", "rows": 2, "cols": 2, "entries": [[2,0],[0,0],[0,0],[0,0]]}
//! {"variant": "direct_sum", "summands": [...]}
//! {"variant": "affine", "model": {...}, "a": ["1","0"], "b": ["-1","0"]}
//! {"variant": "perturbation", "base": {"points": [], "clusters": [...]}, "support": {"0": ["7","0"]}}
//! {"variant": "power", "model": {...}, "exponent": 3}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::model::{DiagonalModel, DiagonalPerturbation, Direction, OperatorModel, WeightedShift, Weights};
use super::{Dim, OperatorError};
use crate::exact::{format_rational, parse_rational, serde_rational, ExactComplex, Rational};
use crate::linalg::{ComplexMatrix, MatrixJson};
use crate::spectral_sets::{Cluster, ClusterJson};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalJson {
    #[serde(default)]
    pub points: Vec<ExactComplex>,
    /// One per point; every point has multiplicity 1 when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<Dim>>,
    #[serde(default)]
    pub clusters: Vec<ClusterJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightsJson {
    Constant {
        #[serde(with = "serde_rational")]
        value: Rational,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        prefix: Vec<String>,
    },
    /// `decay` is `"1/n"` or `"1/n^k"`.
    Null { decay: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum OperatorJson {
    Matrix(MatrixJson),
    Diagonal(DiagonalJson),
    Shift { direction: Direction, weights: WeightsJson },
    DirectSum { summands: Vec<OperatorJson> },
    Affine { model: Box<OperatorJson>, a: ExactComplex, b: ExactComplex },
    /// Keys are entry positions written as decimal strings.
    Perturbation { base: DiagonalJson, support: BTreeMap<String, ExactComplex> },
    Power { model: Box<OperatorJson>, exponent: u32 },
}

impl From<&DiagonalModel> for DiagonalJson {
    fn from(d: &DiagonalModel) -> Self {
        let all_one = d.points().iter().all(|(_, m)| *m == Dim::Finite(1));
        DiagonalJson {
            points: d.points().iter().map(|(v, _)| v.clone()).collect(),
            multiplicities: (!all_one).then(|| d.points().iter().map(|(_, m)| *m).collect()),
            clusters: d.clusters().iter().map(ClusterJson::from).collect(),
        }
    }
}

impl TryFrom<&DiagonalJson> for DiagonalModel {
    type Error = OperatorError;

    fn try_from(j: &DiagonalJson) -> Result<Self, Self::Error> {
        let mults = match &j.multiplicities {
            Some(m) if m.len() != j.points.len() => {
                return Err(OperatorError::InvalidModel(format!(
                    "{} multiplicities for {} points",
                    m.len(),
                    j.points.len()
                )))
            }
            Some(m) => m.clone(),
            None => vec![Dim::Finite(1); j.points.len()],
        };
        let clusters = j.clusters.iter().map(Cluster::try_from).collect::<Result<Vec<_>, _>>()?;
        DiagonalModel::new(j.points.iter().cloned().zip(mults), clusters)
    }
}

impl From<&Weights> for WeightsJson {
    fn from(w: &Weights) -> Self {
        match w {
            Weights::Constant { value, prefix } => {
                WeightsJson::Constant { value: value.clone(), prefix: prefix.iter().map(format_rational).collect() }
            }
            Weights::Null { exponent: 1 } => WeightsJson::Null { decay: "1/n".into() },
            Weights::Null { exponent } => WeightsJson::Null { decay: format!("1/n^{exponent}") },
        }
    }
}

impl TryFrom<&WeightsJson> for Weights {
    type Error = OperatorError;

    fn try_from(j: &WeightsJson) -> Result<Self, Self::Error> {
        match j {
            WeightsJson::Constant { value, prefix } => {
                let prefix = prefix
                    .iter()
                    .map(|s| parse_rational(s).map_err(|e| OperatorError::InvalidModel(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Weights::Constant { value: value.clone(), prefix })
            }
            WeightsJson::Null { decay } => {
                let text: String = decay.chars().filter(|c| !c.is_whitespace()).collect();
                let exponent = match text.strip_prefix("1/n") {
                    Some("") => Some(1),
                    Some(rest) => rest.strip_prefix('^').and_then(|k| k.parse::<u32>().ok()),
                    None => None,
                };
                match exponent {
                    Some(e) if e > 0 => Ok(Weights::Null { exponent: e }),
                    _ => Err(OperatorError::InvalidModel(format!("unsupported decay `{decay}` (expected 1/n or 1/n^k)"))),
                }
            }
        }
    }
}

impl From<&OperatorModel> for OperatorJson {
    fn from(m: &OperatorModel) -> Self {
        match m {
            OperatorModel::FiniteMatrix(a) => OperatorJson::Matrix(MatrixJson::from(a)),
            OperatorModel::Diagonal(d) => OperatorJson::Diagonal(d.into()),
            OperatorModel::WeightedShift(s) => {
                OperatorJson::Shift { direction: s.direction, weights: (&s.weights).into() }
            }
            OperatorModel::DirectSum(parts) => OperatorJson::DirectSum { summands: parts.iter().map(Into::into).collect() },
            OperatorModel::Affine { model, a, b } => {
                OperatorJson::Affine { model: Box::new(model.as_ref().into()), a: a.clone(), b: b.clone() }
            }
            OperatorModel::DiagonalPerturbation(p) => OperatorJson::Perturbation {
                base: p.base().into(),
                support: p.support().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            },
            OperatorModel::Power { model, exponent } => {
                OperatorJson::Power { model: Box::new(model.as_ref().into()), exponent: *exponent }
            }
        }
    }
}

impl TryFrom<&OperatorJson> for OperatorModel {
    type Error = OperatorError;

    fn try_from(j: &OperatorJson) -> Result<Self, Self::Error> {
        let m = match j {
            OperatorJson::Matrix(mj) => OperatorModel::FiniteMatrix(ComplexMatrix::try_from(mj)?),
            OperatorJson::Diagonal(d) => OperatorModel::Diagonal(d.try_into()?),
            OperatorJson::Shift { direction, weights } => {
                OperatorModel::WeightedShift(WeightedShift::new(*direction, weights.try_into()?)?)
            }
            OperatorJson::DirectSum { summands } => {
                OperatorModel::DirectSum(summands.iter().map(OperatorModel::try_from).collect::<Result<_, _>>()?)
            }
            OperatorJson::Affine { model, a, b } => {
                OperatorModel::Affine { model: Box::new(model.as_ref().try_into()?), a: a.clone(), b: b.clone() }
            }
            OperatorJson::Perturbation { base, support } => {
                let mut positions = BTreeMap::new();
                for (k, v) in support {
                    let p = k
                        .trim()
                        .parse::<u64>()
                        .map_err(|_| OperatorError::InvalidModel(format!("support key `{k}` is not a position")))?;
                    positions.insert(p, v.clone());
                }
                OperatorModel::DiagonalPerturbation(DiagonalPerturbation::new(base.try_into()?, positions)?)
            }
            OperatorJson::Power { model, exponent } => {
                OperatorModel::Power { model: Box::new(model.as_ref().try_into()?), exponent: *exponent }
            }
        };
        m.validate()?;
        Ok(m)
    }
}

impl OperatorModel {
    pub fn from_json(text: &str) -> Result<Self, OperatorError> {
        let j: OperatorJson = serde_json::from_str(text).map_err(|e| OperatorError::InvalidModel(e.to_string()))?;
        OperatorModel::try_from(&j)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&OperatorJson::from(self)).expect("operator JSON always serializes")
    }
}

impl Serialize for OperatorModel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OperatorJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = OperatorJson::deserialize(d)?;
        OperatorModel::try_from(&j).map_err(serde::de::Error::custom)
    }
}

impl Serialize for DiagonalModel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DiagonalJson::from(self).serialize(s)
    }
}
