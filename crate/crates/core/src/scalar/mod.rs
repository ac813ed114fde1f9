//! Exact coefficient arithmetic.
//!
//! Three coefficient contexts are supported: the rationals, a real quadratic field `ℚ(√d)`
//! and plain `f64`. Every scalar in one computation lives in a single context; mixing
//! contexts is an error rather than an implicit promotion.

mod cf;
mod decimal;
mod quad;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cf::{continued_fraction, convergents, is_good_approximation};
pub use decimal::CertifiedDecimal;
pub use quad::{is_square_free, rational_to_f64, QuadScalar};

pub(crate) use quad::rational_sign;

/// Arbitrary-precision rational; always stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars from different contexts")]
    ContextMismatch,
    #[error("continued fraction requested for a rational number")]
    RationalInput,
    #[error("radicand {0} is not a square-free integer ≥ 2")]
    InvalidRadicand(u32),
    #[error("cannot parse scalar literal `{0}`")]
    Parse(String),
}

/// The coefficient field shared by all scalars of one computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarContext {
    Rational,
    Quadratic(u32),
    Float64,
}

impl ScalarContext {
    pub fn quadratic(d: u32) -> Result<Self, ScalarError> {
        if is_square_free(d) {
            Ok(ScalarContext::Quadratic(d))
        } else {
            Err(ScalarError::InvalidRadicand(d))
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(self, v: i64) -> Scalar {
        self.from_rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(self, r: Rational) -> Scalar {
        match self {
            ScalarContext::Rational => Scalar::Rational(r),
            ScalarContext::Quadratic(d) => Scalar::Quadratic(QuadScalar::from_rational(r, d)),
            ScalarContext::Float64 => Scalar::Float(rational_to_f64(&r)),
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Scalar {
        self.from_rational(Rational::new(num.into(), den.into()))
    }

    /// Lifts a scalar from a subfield; errors if it does not belong to this context.
    pub fn lift(self, s: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, s) {
            (c, _) if s.context() == c => Ok(s.clone()),
            (ScalarContext::Quadratic(d), Scalar::Rational(r)) => {
                Ok(Scalar::Quadratic(QuadScalar::from_rational(r.clone(), d)))
            }
            (ScalarContext::Rational, Scalar::Quadratic(q)) if q.is_rational() => {
                Ok(Scalar::Rational(q.rational_part().clone()))
            }
            (ScalarContext::Float64, Scalar::Rational(r)) => Ok(Scalar::Float(rational_to_f64(r))),
            (ScalarContext::Float64, Scalar::Quadratic(q)) => Ok(Scalar::Float(q.to_f64())),
            _ => Err(ScalarError::ContextMismatch),
        }
    }

    /// Parses a textual literal: `"num/den"` or `"n"` for rationals, `"[a, b, d]"` for
    /// `a + b√d`, and a decimal for `f64`.
    pub fn parse(self, text: &str) -> Result<Scalar, ScalarError> {
        let lit: Scalar = text.parse()?;
        match (self, &lit) {
            (ScalarContext::Float64, Scalar::Rational(_)) => {
                let v: f64 = text.trim().parse().or_else(|_| Ok::<f64, ScalarError>(lit.to_f64()))?;
                Ok(Scalar::Float(v))
            }
            _ => self.lift(&lit),
        }
    }
}

impl fmt::Display for ScalarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarContext::Rational => write!(f, "rational"),
            ScalarContext::Quadratic(d) => write!(f, "quadratic({d})"),
            ScalarContext::Float64 => write!(f, "float64"),
        }
    }
}

/// A coefficient in one of the three contexts.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    Quadratic(QuadScalar),
    Float(f64),
}

impl Scalar {
    pub fn context(&self) -> ScalarContext {
        match self {
            Scalar::Rational(_) => ScalarContext::Rational,
            Scalar::Quadratic(q) => ScalarContext::Quadratic(q.radicand()),
            Scalar::Float(_) => ScalarContext::Float64,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quadratic(q) => q.is_zero(),
            Scalar::Float(v) => *v == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Quadratic(q) => q.rational_part().is_one() && q.irrational_part().is_zero(),
            Scalar::Float(v) => *v == 1.0,
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Quadratic(a), Scalar::Quadratic(b)) => a.try_add(b).map(Scalar::Quadratic),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(ScalarError::ContextMismatch),
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a - b)),
            (Scalar::Quadratic(a), Scalar::Quadratic(b)) => a.try_sub(b).map(Scalar::Quadratic),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a - b)),
            _ => Err(ScalarError::ContextMismatch),
        }
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Quadratic(a), Scalar::Quadratic(b)) => a.try_mul(b).map(Scalar::Quadratic),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(ScalarError::ContextMismatch),
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if self.context() != other.context() {
            return Err(ScalarError::ContextMismatch);
        }
        self.try_mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Quadratic(q) => Scalar::Quadratic(q.inverse()?),
            Scalar::Float(v) => Scalar::Float(1.0 / v),
        })
    }

    /// Multiplies by an integer, staying in the same context.
    pub fn mul_int(&self, k: i64) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r * Rational::from_integer(k.into())),
            Scalar::Quadratic(q) => Scalar::Quadratic(q.scale(&Rational::from_integer(k.into()))),
            Scalar::Float(v) => Scalar::Float(v * k as f64),
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a * r),
            Scalar::Quadratic(q) => Scalar::Quadratic(q.scale(r)),
            Scalar::Float(v) => Scalar::Float(v * rational_to_f64(r)),
        }
    }

    /// Sign of the real value; exact in the rational and quadratic contexts.
    pub fn exact_sign(&self) -> i8 {
        match self {
            Scalar::Rational(r) => rational_sign(r),
            Scalar::Quadratic(q) => q.exact_sign(),
            Scalar::Float(v) => {
                if *v > 0.0 {
                    1
                } else if *v < 0.0 {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.exact_sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => rational_to_f64(r),
            Scalar::Quadratic(q) => q.to_f64(),
            Scalar::Float(v) => *v,
        }
    }

    /// Certified decimal enclosure of the value.
    pub fn certified(&self) -> CertifiedDecimal {
        match self {
            Scalar::Rational(r) => CertifiedDecimal::from_quad(&QuadScalar::from_rational(r.clone(), 2)),
            Scalar::Quadratic(q) => CertifiedDecimal::from_quad(q),
            Scalar::Float(v) => CertifiedDecimal::new(*v, v.abs() * f64::EPSILON),
        }
    }

    /// As an exact quadratic element over `d` when the value is rational or already over `d`.
    pub fn as_quad(&self, d: u32) -> Option<QuadScalar> {
        match self {
            Scalar::Rational(r) => Some(QuadScalar::from_rational(r.clone(), d)),
            Scalar::Quadratic(q) if q.radicand() == d => Some(q.clone()),
            Scalar::Quadratic(q) if q.is_rational() => Some(QuadScalar::from_rational(q.rational_part().clone(), d)),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Rational(r) => Some(r.clone()),
            Scalar::Quadratic(q) if q.is_rational() => Some(q.rational_part().clone()),
            _ => None,
        }
    }

    /// Canonical literal text.
    pub fn literal(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Quadratic(q) => write!(f, "{q}"),
            Scalar::Float(v) => write!(f, "{v:?}"),
        }
    }
}

fn parse_rational(text: &str) -> Result<Rational, ScalarError> {
    let t = text.trim();
    let err = || ScalarError::Parse(text.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational::new(n, d))
    } else if let Ok(n) = t.parse::<BigInt>() {
        Ok(Rational::from_integer(n))
    } else {
        let v: f64 = t.parse().map_err(|_| err())?;
        Rational::from_float(v).ok_or_else(err)
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Context-free parse: `[a, b, d]` is quadratic, anything else rational.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 3 {
                return Err(ScalarError::Parse(s.to_string()));
            }
            let a = parse_rational(parts[0])?;
            let b = parse_rational(parts[1])?;
            let d: u32 = parts[2].trim().parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
            return QuadScalar::new(a, b, d).map(Scalar::Quadratic);
        }
        parse_rational(t).map(Scalar::Rational)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quadratic(q) => Scalar::Quadratic(-q),
            Scalar::Float(v) => Scalar::Float(-v),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

// Operator forms assume a shared context; containers validate contexts up front.
impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.try_add(rhs).expect("scalar context mismatch")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalar context mismatch")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.try_mul(rhs).expect("scalar context mismatch")
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.literal())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Serializes a rational as its `num/den` literal.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&r.to_string())
}
