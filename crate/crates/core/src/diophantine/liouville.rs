use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::Serialize;

use crate::scalar::{CertifiedDecimal, Rational};

use super::DiophantineError;

/// Near-resonance of `ω = (1, α)` with `α = Σ_j 10^{−j!}` along `β_k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiouvilleWitness {
    pub k: u32,
    pub m: u32,
    #[serde(serialize_with = "serialize_ints")]
    pub beta_k: Vec<BigInt>,
    /// Encloses `|(ω,β_k)|` for the full series `α`.
    pub pairing_bound: CertifiedDecimal,
    /// Encloses `|(ω,β_k)|·‖β_k‖^{1+ν}`.
    pub product: CertifiedDecimal,
    /// Exact rational enclosure of `|(ω,β_k)|`.
    #[serde(skip)]
    pub exact_pairing: (Rational, Rational),
    /// Exact rational enclosure of the product when `(1+ν)/2` is a nonnegative integer.
    #[serde(skip)]
    pub exact_product: Option<(Rational, Rational)>,
}

fn serialize_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl LiouvilleWitness {
    /// True when the product of `self` is certainly smaller than that of `other`.
    pub fn strictly_below(&self, other: &LiouvilleWitness) -> bool {
        match (&self.exact_product, &other.exact_product) {
            (Some((_, hi)), Some((lo, _))) => hi < lo,
            _ => self.product.upper() < other.product.lower(),
        }
    }
}

fn factorial(k: u32) -> u32 {
    (1..=k).product()
}

fn ten_pow(e: u32) -> BigInt {
    Pow::pow(BigInt::from(10), e)
}

fn enclose(lo: &Rational, hi: &Rational) -> CertifiedDecimal {
    let (a, b) = (CertifiedDecimal::from_rational(lo), CertifiedDecimal::from_rational(hi));
    let (l, u) = (a.lower(), b.upper());
    let value = 0.5 * (l + u);
    CertifiedDecimal::new(value, 0.5 * (u - l) + value.abs() * f64::EPSILON)
}

/// Builds `β_k = (Σ_{j≤k} 10^{k!−j!}, −10^{k!})` and encloses `|(ω,β_k)|` using the partial sum
/// `α_m` plus the tail bound `0 < α − α_m ≤ 2·10^{−(m+1)!}`.
pub fn liouville_witness(k: u32, nu: &Rational, m: u32) -> Result<LiouvilleWitness, DiophantineError> {
    if k == 0 || m <= k {
        return Err(DiophantineError::InvalidInput("need 1 ≤ k < m".into()));
    }
    if m > 6 {
        return Err(DiophantineError::InvalidInput("m ≤ 6 keeps the partial sums representable".into()));
    }
    let kf = factorial(k);
    let first = (0..=k).fold(BigInt::zero(), |acc, j| acc + ten_pow(kf - factorial(j)));
    let beta = vec![first, -ten_pow(kf)];
    let scale = Rational::from_integer(ten_pow(kf));
    let tail_exact = (k + 1..=m).fold(Rational::zero(), |acc, j| acc + Rational::new(BigInt::one(), ten_pow(factorial(j))));
    let lo = &scale * tail_exact;
    let hi = &lo + &scale * Rational::new(BigInt::from(2), ten_pow(factorial(m + 1)));
    let norm_sq = Rational::from_integer(&beta[0] * &beta[0] + &beta[1] * &beta[1]);
    let half = (nu + Rational::one()) / Rational::from_integer(BigInt::from(2));
    let exact_product = if half.is_integer() && half >= Rational::zero() {
        let h = half.to_integer().to_u32().ok_or_else(|| DiophantineError::InvalidInput("exponent too large".into()))?;
        let w: Rational = Pow::pow(norm_sq.clone(), h);
        Some((&lo * &w, &hi * &w))
    } else {
        None
    };
    let product = match &exact_product {
        Some((a, b)) => enclose(a, b),
        None => {
            let e = crate::scalar::rational_to_f64(&(nu + Rational::one()));
            let w = crate::scalar::rational_to_f64(&norm_sq).powf(0.5 * e);
            let p = enclose(&lo, &hi);
            let slack = 16.0 * f64::EPSILON;
            CertifiedDecimal::new(p.value * w, p.error * w + (p.value * w).abs() * slack)
        }
    };
    let pairing_bound = enclose(&lo, &hi);
    Ok(LiouvilleWitness { k, m, beta_k: beta, pairing_bound, product, exact_pairing: (lo, hi), exact_product })
}
