use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{rational_to_f64, QuadScalar, Rational};

/// A real number reported as `value ± error`, where the true value is guaranteed to lie in
/// `[value − error, value + error]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedDecimal {
    pub value: f64,
    pub error: f64,
}

/// Significant decimal digits kept when enclosing exact values.
const DIGITS: i32 = 24;

impl CertifiedDecimal {
    pub fn new(value: f64, error: f64) -> Self {
        CertifiedDecimal { value, error }
    }

    pub fn exact_zero() -> Self {
        CertifiedDecimal { value: 0.0, error: 0.0 }
    }

    /// Encloses `x` between consecutive multiples of `10^-k`, with `k` chosen from the
    /// magnitude of `x`, then widens by the rounding of the midpoint to `f64`.
    pub fn from_quad(x: &QuadScalar) -> Self {
        if x.is_zero() {
            return CertifiedDecimal::exact_zero();
        }
        let approx = x.to_f64().abs();
        let mag = if approx > 0.0 && approx.is_finite() { approx.log10().floor() as i32 } else { 0 };
        let k = (DIGITS - mag).max(0);
        let scale = Rational::from_integer(BigInt::from(10).pow(k as u32));
        let floor = x.scale(&scale).floor();
        if x.is_rational() && Rational::from_integer(floor.clone()) == x.rational_part() * &scale {
            let v = rational_to_f64(x.rational_part());
            let err = v.abs() * f64::EPSILON;
            return CertifiedDecimal::new(v, err);
        }
        let lo = Rational::new(floor.clone(), BigInt::from(10).pow(k as u32));
        let mid = &lo + Rational::new(BigInt::from(1), BigInt::from(2) * BigInt::from(10).pow(k as u32));
        let v = rational_to_f64(&mid);
        let half_width = 0.5 * 10f64.powi(-k);
        CertifiedDecimal::new(v, half_width + v.abs() * f64::EPSILON)
    }

    pub fn from_rational(r: &Rational) -> Self {
        CertifiedDecimal::from_quad(&QuadScalar::from_rational(r.clone(), 2))
    }

    pub fn lower(&self) -> f64 {
        self.value - self.error
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lower() && v <= self.upper()
    }

    /// Encloses `self^(1/p)` for a nonnegative enclosure.
    pub fn root(&self, p: u32) -> Self {
        let lo = self.lower().max(0.0).powf(1.0 / p as f64);
        let hi = self.upper().max(0.0).powf(1.0 / p as f64);
        let value = 0.5 * (lo + hi);
        let error = 0.5 * (hi - lo) + value.abs() * 4.0 * f64::EPSILON;
        CertifiedDecimal::new(value, error)
    }
}

impl fmt::Display for CertifiedDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} ± {:.1e}", self.value, self.error)
    }
}
