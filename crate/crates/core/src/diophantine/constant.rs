use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::lattice::for_each_half_ball;
use crate::scalar::{CertifiedDecimal, Rational, Scalar};

use super::{norm_power, pairing_error_bound, DiophantineError, FrequencyVector};

/// Smallest value of `|(ω,I)|·‖I‖^{n−1+ν}` over `0 < ‖I‖_∞ ≤ N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiophantineEstimate {
    pub c_est: CertifiedDecimal,
    #[serde(serialize_with = "crate::scalar::serialize_rational")]
    pub nu: Rational,
    pub cutoff: u32,
    pub worst: Vec<i32>,
    pub norm_kind: &'static str,
    /// `C_est^{2b}` where `n − 1 + ν = a/b` in lowest terms; exact outside the float context.
    pub exact_power: Scalar,
    /// Lattice vectors that survived the floating-point screen and were compared exactly.
    pub candidates: usize,
}

impl DiophantineEstimate {
    /// Exact sign of `C_est(self) − C_est(other)`; both must share `ω` and `ν`.
    pub fn cmp_exact(&self, other: &DiophantineEstimate) -> Result<std::cmp::Ordering, DiophantineError> {
        let d = self.exact_power.try_sub(&other.exact_power)?;
        Ok(d.exact_sign().cmp(&0))
    }
}

fn exponent(n: usize, nu: &Rational) -> Rational {
    nu + Rational::from_integer(BigInt::from(n as i64 - 1))
}

/// `|(ω,I)|^{2b} · (‖I‖²)^a` for `n − 1 + ν = a/b`.
fn exact_power(omega: &FrequencyVector, lattice: &[i32], e: &Rational) -> Result<Scalar, DiophantineError> {
    let b = e.denom().to_u32().ok_or_else(|| DiophantineError::InvalidInput("exponent denominator too large".into()))?;
    let a = e.numer().to_i32().ok_or_else(|| DiophantineError::InvalidInput("exponent numerator too large".into()))?;
    let pair = omega.pairing(lattice);
    let sq = pair.try_mul(&pair)?;
    let mut acc = omega.context().one();
    for _ in 0..b {
        acc = acc.try_mul(&sq)?;
    }
    let s: i64 = lattice.iter().map(|&x| (x as i64) * (x as i64)).sum();
    let s = Rational::from_integer(BigInt::from(s));
    let norm = if a >= 0 { num_traits::Pow::pow(s, a as u32) } else { num_traits::Pow::pow(s.recip(), a.unsigned_abs()) };
    Ok(acc.mul_rational(&norm))
}

/// Exact minimization of `|(ω,I)|·‖I‖^{n−1+ν}` over the punctured sup-norm ball of radius `N`.
///
/// A floating-point pass with rigorous error bounds discards every `I` whose lower bound exceeds
/// the smallest upper bound; the survivors are compared exactly through their `2b`-th powers.
pub fn kolmogorov_constant(omega: &FrequencyVector, nu: &Rational, cutoff: u32) -> Result<DiophantineEstimate, DiophantineError> {
    if cutoff == 0 {
        return Err(DiophantineError::InvalidInput("cutoff must be at least 1".into()));
    }
    let n = omega.n();
    let e = exponent(n, nu);
    if e.is_negative() {
        return Err(DiophantineError::InvalidInput("n − 1 + ν must be nonnegative".into()));
    }
    let e_f = crate::scalar::rational_to_f64(&e);
    let w = omega.to_f64();
    let slack = 16.0 * f64::EPSILON;
    let bounds = |v: &[i32]| {
        let pf: f64 = w.iter().zip(v).map(|(a, &b)| a * b as f64).sum::<f64>().abs();
        let err = pairing_error_bound(&w, v);
        let s: f64 = v.iter().map(|&x| (x as f64) * (x as f64)).sum();
        let np = norm_power(s, e_f);
        ((pf - err).max(0.0) * np * (1.0 - slack), (pf + err) * np * (1.0 + slack))
    };
    let mut best_upper = f64::INFINITY;
    for_each_half_ball(n, cutoff, |v| {
        let (_, hi) = bounds(v);
        if hi < best_upper {
            best_upper = hi;
        }
    });
    let mut candidates: Vec<Vec<i32>> = Vec::new();
    for_each_half_ball(n, cutoff, |v| {
        if bounds(v).0 <= best_upper {
            candidates.push(v.to_vec());
        }
    });
    // ties resolve to the smallest sup-norm, then lexicographically
    candidates.sort_by_key(|v| (v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0), v.clone()));
    let mut worst: Option<(Vec<i32>, Scalar)> = None;
    for v in &candidates {
        let val = exact_power(omega, v, &e)?;
        let better = match &worst {
            None => true,
            Some((_, cur)) => val.try_sub(cur)?.exact_sign() < 0,
        };
        if better {
            worst = Some((v.clone(), val));
        }
    }
    let (worst, power) = worst.expect("nonempty ball");
    let pair = omega.pairing(&worst).abs().certified();
    let s: f64 = worst.iter().map(|&x| (x as f64) * (x as f64)).sum();
    let np = norm_power(s, e_f);
    let value = pair.value * np;
    let c_est = CertifiedDecimal::new(value, pair.error * np + value.abs() * slack);
    Ok(DiophantineEstimate {
        c_est: if power.is_zero() { CertifiedDecimal::exact_zero() } else { c_est },
        nu: nu.clone(),
        cutoff,
        worst,
        norm_kind: "euclidean",
        exact_power: power,
        candidates: candidates.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{continued_fraction, convergents, ScalarContext};
    use std::cmp::Ordering;

    fn one() -> Rational {
        Rational::from_integer(BigInt::from(1))
    }

    #[test]
    fn resonant_vector_gives_zero() {
        let omega = FrequencyVector::parse(ScalarContext::Rational, &["1", "1"]).unwrap();
        let est = kolmogorov_constant(&omega, &one(), 2).unwrap();
        assert_eq!(est.c_est, CertifiedDecimal::exact_zero());
        assert_eq!(est.worst, vec![1, -1]);
        assert!(est.exact_power.is_zero());
    }

    /// Brute force over the whole ball in exact arithmetic.
    fn brute_force(omega: &FrequencyVector, nu: &Rational, cutoff: u32) -> Scalar {
        let e = exponent(omega.n(), nu);
        let mut best: Option<Scalar> = None;
        for_each_half_ball(omega.n(), cutoff, |v| {
            let val = exact_power(omega, v, &e).unwrap();
            if best.as_ref().map_or(true, |b| val.try_sub(b).unwrap().exact_sign() < 0) {
                best = Some(val);
            }
        });
        best.unwrap()
    }

    #[test]
    fn screen_agrees_with_brute_force() {
        let ctx = ScalarContext::quadratic(2).unwrap();
        let omega = FrequencyVector::parse(ctx, &["1", "[0, 1, 2]"]).unwrap();
        for (nu, cutoff) in [(one(), 12u32), (Rational::new(1.into(), 2.into()), 9), (Rational::new(3.into(), 2.into()), 7)] {
            let est = kolmogorov_constant(&omega, &nu, cutoff).unwrap();
            assert_eq!(est.exact_power, brute_force(&omega, &nu, cutoff));
        }
        let ctx3 = ScalarContext::quadratic(3).unwrap();
        let omega3 = FrequencyVector::parse(ctx3, &["1", "[0, 1, 3]", "[1, 1, 3]"]).unwrap();
        let est = kolmogorov_constant(&omega3, &one(), 3).unwrap();
        assert_eq!(est.exact_power, brute_force(&omega3, &one(), 3));
    }

    #[test]
    fn sqrt2_constant_is_monotone_and_attained_at_convergents() {
        let ctx = ScalarContext::quadratic(2).unwrap();
        let sqrt2 = ctx.parse("[0, 1, 2]").unwrap();
        let omega = FrequencyVector::new(vec![ctx.one(), sqrt2.clone()]).unwrap();
        let conv: Vec<Vec<i32>> = convergents(&continued_fraction(&sqrt2.as_quad(2).unwrap(), 12).unwrap())
            .into_iter()
            .map(|(p, q)| vec![p.to_i32().unwrap(), -q.to_i32().unwrap()])
            .collect();
        let mut prev: Option<DiophantineEstimate> = None;
        for cutoff in [5, 20, 100] {
            let est = kolmogorov_constant(&omega, &one(), cutoff).unwrap();
            assert!(est.c_est.lower() > 0.0);
            assert!(conv.contains(&est.worst), "{:?}", est.worst);
            if let Some(p) = &prev {
                assert_ne!(est.cmp_exact(p).unwrap(), Ordering::Greater);
            }
            prev = Some(est);
        }
        // (√2 − 1)·2
        let expected = 2.0 * (std::f64::consts::SQRT_2 - 1.0);
        assert!(prev.unwrap().c_est.contains(expected));
    }
}
