//! Elements `a + b√d` of a real quadratic field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rational, ScalarError};

/// `a + b√d` with rational `a`, `b` and a square-free radicand `d ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    a: Rational,
    b: Rational,
    d: u32,
}

/// Returns true when `d ≥ 2` has no square factor.
pub fn is_square_free(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= d as u64 {
        if d as u64 % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl QuadScalar {
    pub fn new(a: Rational, b: Rational, d: u32) -> Result<Self, ScalarError> {
        if !is_square_free(d) {
            return Err(ScalarError::InvalidRadicand(d));
        }
        Ok(QuadScalar { a, b, d })
    }

    /// Caller guarantees `d` is square-free.
    pub(crate) fn new_unchecked(a: Rational, b: Rational, d: u32) -> Self {
        debug_assert!(is_square_free(d));
        QuadScalar { a, b, d }
    }

    pub fn from_rational(a: Rational, d: u32) -> Self {
        QuadScalar::new_unchecked(a, Rational::zero(), d)
    }

    /// The generator `√d`.
    pub fn sqrt_d(d: u32) -> Result<Self, ScalarError> {
        QuadScalar::new(Rational::zero(), Rational::one(), d)
    }

    pub fn zero(d: u32) -> Self {
        QuadScalar::from_rational(Rational::zero(), d)
    }

    pub fn one(d: u32) -> Self {
        QuadScalar::from_rational(Rational::one(), d)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check(&self, other: &Self) -> Result<(), ScalarError> {
        if self.d != other.d {
            Err(ScalarError::ContextMismatch)
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(QuadScalar::new_unchecked(&self.a + &other.a, &self.b + &other.b, self.d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(QuadScalar::new_unchecked(&self.a - &other.a, &self.b - &other.b, self.d))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let d = Rational::from_integer(BigInt::from(self.d));
        let a = &self.a * &other.a + &self.b * &other.b * d;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QuadScalar::new_unchecked(a, b, self.d))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let inv = other.inverse()?;
        self.try_mul(&inv)
    }

    /// Galois conjugate `a − b√d`.
    pub fn conjugate(&self) -> Self {
        QuadScalar::new_unchecked(self.a.clone(), -self.b.clone(), self.d)
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        let d = Rational::from_integer(BigInt::from(self.d));
        &self.a * &self.a - &self.b * &self.b * d
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // The norm of a nonzero element is nonzero since d is not a square.
        let n = self.norm();
        Ok(QuadScalar::new_unchecked(&self.a / &n, -(&self.b / &n), self.d))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadScalar::new_unchecked(&self.a * r, &self.b * r, self.d)
    }

    /// Sign of the real number `a + b√d`, decided by comparing `a²` with `b²d`.
    pub fn exact_sign(&self) -> i8 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        if sa >= 0 && sb >= 0 {
            return if sa == 0 && sb == 0 { 0 } else { 1 };
        }
        if sa <= 0 && sb <= 0 {
            return -1;
        }
        let d = Rational::from_integer(BigInt::from(self.d));
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * d;
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            // a² = b²d with b ≠ 0 would make d a rational square.
            Ordering::Equal => unreachable!("square-free radicand"),
        }
    }

    pub fn abs(&self) -> Self {
        if self.exact_sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact comparison of the real embeddings.
    pub fn cmp_real(&self, other: &Self) -> Result<Ordering, ScalarError> {
        let diff = self.try_sub(other)?;
        Ok(diff.exact_sign().cmp(&0))
    }

    /// `⌊a + b√d⌋`, computed with integer square roots only.
    pub fn floor(&self) -> BigInt {
        // b√d = ±√(b²d) and ⌊√(N/M)⌋ = ⌊⌊√(NM)⌋ / M⌋.
        let d = Rational::from_integer(BigInt::from(self.d));
        let s = &self.b * &self.b * d;
        let (num, den) = (s.numer().clone(), s.denom().clone());
        let root_floor = (&num * &den).sqrt().div_floor(&den);
        let irr_floor = if self.b.is_negative() {
            // −√s lies in (−⌊√s⌋ − 1, −⌊√s⌋]
            -root_floor - BigInt::one()
        } else {
            root_floor
        };
        // x ∈ [a + irr_floor, a + irr_floor + 2)
        let base = (&self.a + Rational::from_integer(irr_floor)).floor().to_integer();
        let mut m = base;
        loop {
            let next = &m + BigInt::one();
            let diff = self.try_sub(&QuadScalar::from_rational(Rational::from_integer(next.clone()), self.d))
                .expect("same radicand");
            if diff.exact_sign() >= 0 {
                m = next;
            } else {
                return m;
            }
        }
    }

    /// Nearest `f64`; not certified.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * (self.d as f64).sqrt()
    }
}

pub(crate) fn rational_sign(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Falls back to a scaled division when numerator or denominator overflow f64.
        let n = r.numer();
        let d = r.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
        let n2 = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let d2 = (d >> shift).to_f64().unwrap_or(f64::NAN);
        n2 / d2
    })
}

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::new_unchecked(-self.a, -self.b, self.d)
    }
}

impl<'a> Add<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: &QuadScalar) -> QuadScalar {
        self.try_add(rhs).expect("quadratic scalars over different radicands")
    }
}

impl<'a> Sub<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: &QuadScalar) -> QuadScalar {
        self.try_sub(rhs).expect("quadratic scalars over different radicands")
    }
}

impl<'a> Mul<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: &QuadScalar) -> QuadScalar {
        self.try_mul(rhs).expect("quadratic scalars over different radicands")
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.d)
    }
}
