//! Exact complex scalars over the rationals.
//!
//! Every scalar that enters a [`SpectrumModel`](crate::spectral_sets::SpectrumModel)
//! is an [`ExactComplex`], so set membership and equality are decided without
//! any floating comparison. Floating inputs are converted exactly (every finite
//! `f64` is a dyadic rational).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{input}` as {what}")]
pub struct ParseExactError {
    input: String,
    what: &'static str,
}

impl ParseExactError {
    fn new(input: &str, what: &'static str) -> Self {
        Self { input: input.to_string(), what }
    }
}

/// Builds `num / den` as a rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical `p/q` text form used by every JSON schema in the crate.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, an integer, or a plain decimal such as `-0.125` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ParseExactError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseExactError::new(s, "a rational"));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| ParseExactError::new(s, "a rational"))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| ParseExactError::new(s, "a rational"))?;
        if q.is_zero() {
            return Err(ParseExactError::new(s, "a rational with nonzero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(t).ok_or_else(|| ParseExactError::new(s, "a rational"))
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?);
    let shift = exp - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num::pow(ten, shift as usize);
    } else {
        value /= num::pow(ten, (-shift) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Natural log of |r| without overflowing `f64` for huge numerators or denominators.
pub(crate) fn ln_abs(r: &Rational) -> f64 {
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    match r.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => {
            let sign = if r.is_negative() { -1.0 } else { 1.0 };
            sign * ln_abs(r).exp()
        }
    }
}

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactComplex {
    pub re: Rational,
    pub im: Rational,
}

impl ExactComplex {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(int(re), int(im))
    }

    /// `p/q` on the real axis.
    pub fn frac(p: i64, q: i64) -> Self {
        Self::real(ratio(p, q))
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    /// Exact conversion of a finite floating value. Returns `None` for NaN or infinities.
    pub fn from_c64(z: Complex64) -> Option<Self> {
        Some(Self::new(Rational::from_float(z.re)?, Rational::from_float(z.im)?))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        Some(Self::new(&self.re / &d, -&self.im / &d))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.re * r, &self.im * r)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Floating modulus; accurate to a few ulps even for huge or tiny rationals.
    pub fn abs_f64(&self) -> f64 {
        let z = self.to_c64();
        let a = z.norm();
        if a.is_finite() && a > 1e-290 {
            return a;
        }
        let n = self.norm_sqr();
        if n.is_zero() {
            0.0
        } else {
            (0.5 * ln_abs(&n)).exp()
        }
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl FromStr for ExactComplex {
    type Err = ParseExactError;

    /// Accepts `a`, `bi`, `a+bi`, `a-bi` where `a`, `b` are rationals or decimals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ParseExactError::new(s, "a complex number");
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Self::real(parse_rational(&t).map_err(|_| err())?));
        };
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im_part {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other)).map_err(|_| err())?,
        };
        let re = parse_rational(re_part).map_err(|_| err())?;
        Ok(Self::new(re, im))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&ExactComplex> for &ExactComplex {
            type Output = ExactComplex;
            fn $method(self, rhs: &ExactComplex) -> ExactComplex {
                let f: fn(&ExactComplex, &ExactComplex) -> ExactComplex = $body;
                f(self, rhs)
            }
        }
        impl $tr<ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $method(self, rhs: ExactComplex) -> ExactComplex {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $method(self, rhs: &ExactComplex) -> ExactComplex {
                (&self).$method(rhs)
            }
        }
        impl $tr<ExactComplex> for &ExactComplex {
            type Output = ExactComplex;
            fn $method(self, rhs: ExactComplex) -> ExactComplex {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| ExactComplex::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| ExactComplex::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| ExactComplex::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));
// Division by an exact zero panics, like integer division.
forward_binop!(Div, div, |a, b| a * &b.recip().expect("division by exact zero"));

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex::new(-self.re, -self.im)
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        -self.clone()
    }
}

/// Serde adapter writing a rational as the string `"p/q"`.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

impl Serialize for ExactComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&self.re), format_rational(&self.im)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [re, im] = <[String; 2]>::deserialize(d)?;
        Ok(Self::new(
            parse_rational(&re).map_err(serde::de::Error::custom)?,
            parse_rational(&im).map_err(serde::de::Error::custom)?,
        ))
    }
}
