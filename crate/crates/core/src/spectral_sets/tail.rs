//! Closed-form tails and the point maps applied on top of them.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::{One, Signed, ToPrimitive, Zero};

use super::SpectralError;
use crate::exact::{ln_abs, ExactComplex, Rational};

/// Safety factor applied to every floating bound used to prune exact searches.
const BOUND_SLACK: f64 = 1.0 + 1e-6;

/// Offsets `x_n`, `n >= 1`, of a convergent injective sequence `limit + x_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TailSpec {
    /// `x_n = base * ratio^n` with `0 < |ratio| < 1`.
    Geometric { base: ExactComplex, ratio: Rational },
    /// `x_n = scale * n^(-exponent)`.
    Power { scale: ExactComplex, exponent: u32 },
}

impl TailSpec {
    pub fn geometric(base: ExactComplex, ratio: Rational) -> Result<Self, SpectralError> {
        let tail = TailSpec::Geometric { base, ratio };
        tail.validate()?;
        Ok(tail)
    }

    pub fn power(scale: ExactComplex, exponent: u32) -> Result<Self, SpectralError> {
        let tail = TailSpec::Power { scale, exponent };
        tail.validate()?;
        Ok(tail)
    }

    /// `scale * n^-1`, the harmonic tail.
    pub fn harmonic(scale: ExactComplex) -> Self {
        TailSpec::Power { scale, exponent: 1 }
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        match self {
            TailSpec::Geometric { base, ratio } => {
                if base.is_zero() {
                    return Err(SpectralError::InvalidTail("geometric base must be nonzero".into()));
                }
                if ratio.is_zero() || ratio.abs() >= Rational::one() {
                    return Err(SpectralError::InvalidTail("geometric ratio must satisfy 0 < |ratio| < 1".into()));
                }
            }
            TailSpec::Power { scale, exponent } => {
                if scale.is_zero() {
                    return Err(SpectralError::InvalidTail("power scale must be nonzero".into()));
                }
                if *exponent == 0 {
                    return Err(SpectralError::InvalidTail("power exponent must be positive".into()));
                }
            }
        }
        Ok(())
    }

    pub fn offset(&self, n: u64) -> ExactComplex {
        debug_assert!(n >= 1);
        match self {
            TailSpec::Geometric { base, ratio } => base.scale(&num::pow(ratio.clone(), n as usize)),
            TailSpec::Power { scale, exponent } => {
                let denom = num::pow(BigInt::from(n), *exponent as usize);
                scale.scale(&Rational::new(BigInt::one(), denom))
            }
        }
    }

    /// Offsets for `n` in `from..to`, computed incrementally.
    pub fn offsets(&self, from: u64, to: u64) -> Vec<ExactComplex> {
        if from >= to {
            return Vec::new();
        }
        match self {
            TailSpec::Geometric { ratio, .. } => {
                let mut out = Vec::with_capacity((to - from) as usize);
                let mut cur = self.offset(from);
                for _ in from..to {
                    let next = cur.scale(ratio);
                    out.push(cur);
                    cur = next;
                }
                out
            }
            TailSpec::Power { .. } => (from..to).map(|n| self.offset(n)).collect(),
        }
    }

    /// Upper bound on `|x_n|`, nonincreasing in `n`.
    pub fn magnitude_bound(&self, n: u64) -> f64 {
        let raw = match self {
            TailSpec::Geometric { base, ratio } => {
                (base.abs_f64().ln() + n as f64 * ln_abs(ratio)).exp()
            }
            TailSpec::Power { scale, exponent } => scale.abs_f64() / (n as f64).powi(*exponent as i32),
        };
        raw * BOUND_SLACK
    }

    /// Smallest `n >= from` such that `magnitude_bound(m) < eps` for every `m >= n`.
    pub fn first_below(&self, eps: f64, from: u64) -> u64 {
        if eps <= 0.0 || !eps.is_finite() {
            return if eps.is_infinite() && eps > 0.0 { from } else { u64::MAX };
        }
        let estimate = match self {
            TailSpec::Geometric { base, ratio } => {
                let n = (eps.ln() - base.abs_f64().ln() - BOUND_SLACK.ln()) / ln_abs(ratio);
                n.max(0.0).floor()
            }
            TailSpec::Power { scale, exponent } => {
                ((scale.abs_f64() * BOUND_SLACK) / eps).powf(1.0 / *exponent as f64).max(0.0).floor()
            }
        };
        let mut n = if estimate >= 1.8e19 { u64::MAX / 2 } else { estimate as u64 };
        n = n.max(from);
        while n > from && self.magnitude_bound(n - 1) < eps {
            n -= 1;
        }
        while self.magnitude_bound(n) >= eps {
            n += 1;
        }
        n
    }

    /// The unique `n >= 1` with `offset(n) == w`, if any.
    pub fn solve(&self, w: &ExactComplex) -> Option<u64> {
        if w.is_zero() {
            return None;
        }
        match self {
            TailSpec::Geometric { base, ratio } => {
                let q = w / base;
                if !q.is_real() {
                    return None;
                }
                let q = q.re;
                let guess = ln_abs(&q) / ln_abs(ratio);
                if !guess.is_finite() || guess < 0.5 {
                    return (guess.is_finite() && guess > -0.5)
                        .then_some(1)
                        .filter(|&n| num::pow(ratio.clone(), n as usize) == q);
                }
                let centre = guess.round() as u64;
                (centre.saturating_sub(2).max(1)..=centre + 2)
                    .find(|&n| num::pow(ratio.clone(), n as usize) == q)
            }
            TailSpec::Power { scale, exponent } => {
                let q = w / scale;
                if !q.is_real() || !q.re.is_positive() {
                    return None;
                }
                let inv = q.re.recip();
                if !inv.is_integer() {
                    return None;
                }
                let target = inv.to_integer();
                let root = target.nth_root(*exponent);
                (num::pow(root.clone(), *exponent as usize) == target)
                    .then(|| root.to_u64())
                    .flatten()
                    .filter(|&n| n >= 1)
            }
        }
    }

    /// The tail whose offsets are `c * x_n`.
    pub fn scaled(&self, c: &ExactComplex) -> TailSpec {
        match self {
            TailSpec::Geometric { base, ratio } => TailSpec::Geometric { base: base * c, ratio: ratio.clone() },
            TailSpec::Power { scale, exponent } => TailSpec::Power { scale: scale * c, exponent: *exponent },
        }
    }

    pub fn conj(&self) -> TailSpec {
        match self {
            TailSpec::Geometric { base, ratio } => TailSpec::Geometric { base: base.conj(), ratio: ratio.clone() },
            TailSpec::Power { scale, exponent } => TailSpec::Power { scale: scale.conj(), exponent: *exponent },
        }
    }

    /// Closed form of `x_n^k`, which is again a tail of the same kind.
    pub fn powered(&self, k: u32) -> TailSpec {
        match self {
            TailSpec::Geometric { base, ratio } => TailSpec::Geometric {
                base: base.pow(k),
                ratio: num::pow(ratio.clone(), k as usize),
            },
            TailSpec::Power { scale, exponent } => TailSpec::Power { scale: scale.pow(k), exponent: exponent * k },
        }
    }
}

/// Pointwise map applied to the raw values of a cluster.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[allow(clippy::large_enum_variant)]
pub enum PointMap {
    Affine { a: ExactComplex, b: ExactComplex },
    Power(u32),
    Reciprocal,
}

impl PointMap {
    pub fn apply(&self, v: &ExactComplex) -> Option<ExactComplex> {
        match self {
            PointMap::Affine { a, b } => Some(a * v + b),
            PointMap::Power(k) => Some(v.pow(*k)),
            PointMap::Reciprocal => v.recip(),
        }
    }

    /// Exact preimages of `v`; `None` when the map cannot be inverted exactly.
    pub fn invert(&self, v: &ExactComplex) -> Option<Vec<ExactComplex>> {
        match self {
            PointMap::Affine { a, b } => Some(vec![(v - b) / a]),
            PointMap::Reciprocal => Some(v.recip().into_iter().collect()),
            PointMap::Power(_) => None,
        }
    }

    pub fn conj(&self) -> PointMap {
        match self {
            PointMap::Affine { a, b } => PointMap::Affine { a: a.conj(), b: b.conj() },
            other => other.clone(),
        }
    }
}

pub(crate) fn apply_maps(maps: &[PointMap], v: &ExactComplex) -> Option<ExactComplex> {
    maps.iter().try_fold(v.clone(), |acc, m| m.apply(&acc))
}

/// Bound on `|F(u + h) - F(u)|` over `|h| <= eps` for the composed chain `F`.
pub(crate) fn chain_deviation(maps: &[PointMap], u: &ExactComplex, eps: f64) -> f64 {
    let mut centre: Complex64 = u.to_c64();
    let mut e = eps;
    for map in maps {
        match map {
            PointMap::Affine { a, b } => {
                e *= a.abs_f64();
                centre = a.to_c64() * centre + b.to_c64();
            }
            PointMap::Power(k) => {
                let r = centre.norm();
                e = e * *k as f64 * (r + e).powi(*k as i32 - 1);
                centre = centre.powu(*k);
            }
            PointMap::Reciprocal => {
                let r = centre.norm();
                if e >= r * (1.0 - 1e-9) {
                    return f64::INFINITY;
                }
                e /= r * (r - e);
                centre = centre.inv();
            }
        }
        e *= BOUND_SLACK;
    }
    e * BOUND_SLACK + f64::MIN_POSITIVE
}

pub(crate) fn distance_f64(a: &ExactComplex, b: &ExactComplex) -> f64 {
    (a - b).abs_f64()
}
