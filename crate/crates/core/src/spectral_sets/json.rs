//! JSON form of spectrum models. Rationals are `"p/q"` strings, complex
//! numbers are `[re, im]` pairs of such strings.

use serde::{Deserialize, Serialize};

use super::cluster::{ChildTemplate, Cluster};
use super::model::SpectrumModel;
use super::tail::{PointMap, TailSpec};
use super::SpectralError;
use crate::exact::{format_rational, parse_rational, serde_rational, ExactComplex, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailJson {
    Geometric {
        base: ExactComplex,
        #[serde(with = "serde_rational")]
        ratio: Rational,
    },
    Power {
        scale: ExactComplex,
        exponent: Exponent,
    },
}

/// Exponent as an integer or a `"p/q"` string. Only integers are accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Int(u32),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum MapJson {
    Affine { a: ExactComplex, b: ExactComplex },
    Power { n: u32 },
    Reciprocal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterJson {
    pub limit: ExactComplex,
    pub tail: TailJson,
    #[serde(default)]
    pub removed_prefix: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ClusterJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_limit: Option<ExactComplex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumJson {
    #[serde(default)]
    pub points: Vec<ExactComplex>,
    #[serde(default)]
    pub clusters: Vec<ClusterJson>,
}

impl From<&TailSpec> for TailJson {
    fn from(t: &TailSpec) -> Self {
        match t {
            TailSpec::Geometric { base, ratio } => TailJson::Geometric { base: base.clone(), ratio: ratio.clone() },
            TailSpec::Power { scale, exponent } => {
                TailJson::Power { scale: scale.clone(), exponent: Exponent::Int(*exponent) }
            }
        }
    }
}

impl TryFrom<&TailJson> for TailSpec {
    type Error = SpectralError;

    fn try_from(t: &TailJson) -> Result<Self, Self::Error> {
        match t {
            TailJson::Geometric { base, ratio } => TailSpec::geometric(base.clone(), ratio.clone()),
            TailJson::Power { scale, exponent } => {
                let e = match exponent {
                    Exponent::Int(e) => *e,
                    Exponent::Text(s) => {
                        let r = parse_rational(s).map_err(|e| SpectralError::InvalidTail(e.to_string()))?;
                        if !r.is_integer() {
                            return Err(SpectralError::InvalidTail(format!(
                                "non-integer exponent {} is not supported",
                                format_rational(&r)
                            )));
                        }
                        u32::try_from(r.to_integer())
                            .map_err(|_| SpectralError::InvalidTail("exponent out of range".into()))?
                    }
                };
                TailSpec::power(scale.clone(), e)
            }
        }
    }
}

impl From<&PointMap> for MapJson {
    fn from(m: &PointMap) -> Self {
        match m {
            PointMap::Affine { a, b } => MapJson::Affine { a: a.clone(), b: b.clone() },
            PointMap::Power(n) => MapJson::Power { n: *n },
            PointMap::Reciprocal => MapJson::Reciprocal,
        }
    }
}

impl TryFrom<&MapJson> for PointMap {
    type Error = SpectralError;

    fn try_from(m: &MapJson) -> Result<Self, Self::Error> {
        Ok(match m {
            MapJson::Affine { a, b } => {
                if a.is_zero() {
                    return Err(SpectralError::UndefinedMap("affine map with a = 0".into()));
                }
                PointMap::Affine { a: a.clone(), b: b.clone() }
            }
            MapJson::Power { n: 0 } => return Err(SpectralError::UndefinedMap("power map with n = 0".into())),
            MapJson::Power { n } => PointMap::Power(*n),
            MapJson::Reciprocal => PointMap::Reciprocal,
        })
    }
}

impl From<&Cluster> for ClusterJson {
    fn from(c: &Cluster) -> Self {
        let zero = ExactComplex::zero();
        ClusterJson {
            limit: c.limit().clone(),
            tail: c.tail().into(),
            removed_prefix: c.removed_prefix(),
            children: c
                .children()
                .iter()
                .map(|ch| ClusterJson {
                    limit: zero.clone(),
                    tail: (&ch.tail).into(),
                    removed_prefix: ch.removed_prefix,
                    children: Vec::new(),
                    maps: Vec::new(),
                    raw_limit: None,
                })
                .collect(),
            maps: c.maps().iter().map(MapJson::from).collect(),
            raw_limit: (!c.maps().is_empty()).then(|| c.raw_limit().clone()),
        }
    }
}

impl TryFrom<&ClusterJson> for Cluster {
    type Error = SpectralError;

    /// Child entries describe relative offsets: family `m` of a cluster with
    /// offsets `x_m` has leaves `limit + x_m (1 + y_k)`. A child's own `limit`
    /// field is ignored on input and written as 0.
    fn try_from(c: &ClusterJson) -> Result<Self, Self::Error> {
        let children = c
            .children
            .iter()
            .map(|ch| {
                if !ch.children.is_empty() {
                    return Err(SpectralError::DepthOverflow);
                }
                if !ch.maps.is_empty() {
                    return Err(SpectralError::InvalidCluster("children cannot carry maps".into()));
                }
                Ok(ChildTemplate { tail: TailSpec::try_from(&ch.tail)?, removed_prefix: ch.removed_prefix })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let maps = c.maps.iter().map(PointMap::try_from).collect::<Result<Vec<_>, _>>()?;
        let raw_limit = match (&c.raw_limit, maps.is_empty()) {
            (Some(raw), false) => raw.clone(),
            (None, true) => c.limit.clone(),
            (Some(raw), true) if *raw == c.limit => raw.clone(),
            _ => {
                return Err(SpectralError::InvalidCluster(
                    "raw_limit is required exactly when maps are present".into(),
                ))
            }
        };
        let cluster = Cluster::from_parts(raw_limit, TailSpec::try_from(&c.tail)?, c.removed_prefix, children, maps)?;
        if *cluster.limit() != c.limit {
            return Err(SpectralError::InvalidCluster("limit does not match the mapped raw limit".into()));
        }
        Ok(cluster)
    }
}

impl From<&SpectrumModel> for SpectrumJson {
    fn from(m: &SpectrumModel) -> Self {
        SpectrumJson {
            points: m.points().iter().cloned().collect(),
            clusters: m.clusters().iter().map(ClusterJson::from).collect(),
        }
    }
}

impl TryFrom<&SpectrumJson> for SpectrumModel {
    type Error = SpectralError;

    fn try_from(j: &SpectrumJson) -> Result<Self, Self::Error> {
        let clusters = j.clusters.iter().map(Cluster::try_from).collect::<Result<Vec<_>, _>>()?;
        Ok(SpectrumModel::new(j.points.iter().cloned(), clusters))
    }
}

impl Serialize for SpectrumModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpectrumJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpectrumModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SpectrumJson::deserialize(d)?;
        SpectrumModel::try_from(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_depth2_and_mapped() {
        let text = r#"{
            "points": [["5/1","0/1"]],
            "clusters": [
                {"limit": ["0","0"], "tail": {"kind":"power","scale":["1","0"],"exponent":1},
                 "children": [{"limit":["0","0"],"tail":{"kind":"geometric","base":["1","0"],"ratio":"1/4"}}]},
                {"limit": ["1/4","0"], "raw_limit": ["2","0"], "maps": [{"kind":"power","n":2},{"kind":"reciprocal"}],
                 "tail": {"kind":"geometric","base":["1","1"],"ratio":"-1/3"}, "removed_prefix": 2}
            ]
        }"#;
        let m: SpectrumModel = serde_json::from_str(text).unwrap();
        assert_eq!(m.depth(), 2);
        let again: SpectrumModel = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn rejects_bad_shapes() {
        let nested = r#"{"clusters":[{"limit":["0","0"],"tail":{"kind":"power","scale":["1","0"],"exponent":1},
            "children":[{"limit":["0","0"],"tail":{"kind":"power","scale":["1","0"],"exponent":1},
            "children":[{"limit":["0","0"],"tail":{"kind":"power","scale":["1","0"],"exponent":1}}]}]}]}"#;
        assert!(serde_json::from_str::<SpectrumModel>(nested).unwrap_err().to_string().contains("depth"));
        let frac = r#"{"clusters":[{"limit":["0","0"],"tail":{"kind":"power","scale":["1","0"],"exponent":"1/2"}}]}"#;
        assert!(serde_json::from_str::<SpectrumModel>(frac).is_err());
        let int_text = r#"{"clusters":[{"limit":["0","0"],"tail":{"kind":"power","scale":["1","0"],"exponent":"2/1"}}]}"#;
        assert!(serde_json::from_str::<SpectrumModel>(int_text).is_ok());
        let ratio_one = r#"{"clusters":[{"limit":["0","0"],"tail":{"kind":"geometric","base":["1","0"],"ratio":"1"}}]}"#;
        assert!(serde_json::from_str::<SpectrumModel>(ratio_one).is_err());
    }
}
