use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A dimension in `ℕ ∪ {∞}`. JSON: a number or `"infinite"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    Finite(u64),
    Infinite,
}

impl Dim {
    pub const ZERO: Dim = Dim::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Dim::Finite(_))
    }

    pub fn is_zero(self) -> bool {
        self == Dim::ZERO
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Dim::Finite(n) => Some(n),
            Dim::Infinite => None,
        }
    }

    /// `n * self`, with `0 * ∞ = 0`.
    pub fn times(self, n: u64) -> Dim {
        match self {
            _ if n == 0 => Dim::ZERO,
            Dim::Finite(k) => Dim::Finite(k.saturating_mul(n)),
            Dim::Infinite => Dim::Infinite,
        }
    }
}

impl Add for Dim {
    type Output = Dim;

    fn add(self, rhs: Dim) -> Dim {
        match (self, rhs) {
            (Dim::Finite(a), Dim::Finite(b)) => Dim::Finite(a.saturating_add(b)),
            _ => Dim::Infinite,
        }
    }
}

impl std::iter::Sum for Dim {
    fn sum<I: Iterator<Item = Dim>>(iter: I) -> Dim {
        iter.fold(Dim::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(n) => write!(f, "{n}"),
            Dim::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Dim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Dim::Finite(n) => s.serialize_u64(*n),
            Dim::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Dim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(Dim::Finite(n)),
            Raw::Text(t) if t == "infinite" => Ok(Dim::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected a count or \"infinite\", got `{t}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_json() {
        assert_eq!(Dim::Finite(2) + Dim::Finite(3), Dim::Finite(5));
        assert_eq!(Dim::Finite(2) + Dim::Infinite, Dim::Infinite);
        assert_eq!(Dim::Infinite.times(0), Dim::ZERO);
        assert_eq!(serde_json::to_string(&Dim::Infinite).unwrap(), "\"infinite\"");
        assert_eq!(serde_json::from_str::<Dim>("4").unwrap(), Dim::Finite(4));
        assert!(serde_json::from_str::<Dim>("\"many\"").is_err());
    }
}
