//! Regular continued fractions of quadratic irrationals, computed exactly.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{QuadScalar, Rational, ScalarError};

/// First `k` partial quotients of the regular continued fraction of `x`.
///
/// `x` must be irrational; the expansion of a positive quadratic irrational never terminates,
/// so every step inverts a nonzero fractional part.
pub fn continued_fraction(x: &QuadScalar, k: usize) -> Result<Vec<BigInt>, ScalarError> {
    if x.is_rational() {
        return Err(ScalarError::RationalInput);
    }
    let d = x.radicand();
    let mut out = Vec::with_capacity(k);
    let mut cur = x.clone();
    for _ in 0..k {
        let m = cur.floor();
        out.push(m.clone());
        let frac = cur.try_sub(&QuadScalar::from_rational(Rational::from_integer(m), d))?;
        cur = frac.inverse()?;
    }
    Ok(out)
}

/// Convergents `p_i/q_i` of a partial-quotient sequence.
pub fn convergents(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    // p_{-1} = 1, p_{-2} = 0, q_{-1} = 0, q_{-2} = 1
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(quotients.len());
    for a in quotients {
        let p = a * &p1 + &p2;
        let q = a * &q1 + &q2;
        p2 = std::mem::replace(&mut p1, p.clone());
        q2 = std::mem::replace(&mut q1, q.clone());
        out.push((p, q));
    }
    out
}

/// Checks `|x − p/q| < 1/q²` exactly, as `|q²x − pq| < 1`.
pub fn is_good_approximation(x: &QuadScalar, p: &BigInt, q: &BigInt) -> bool {
    let d = x.radicand();
    let q2 = Rational::from_integer(q * q);
    let y = x
        .scale(&q2)
        .try_sub(&QuadScalar::from_rational(Rational::from_integer(p * q), d))
        .expect("same radicand");
    let one = QuadScalar::one(d);
    one.try_sub(&y).unwrap().exact_sign() > 0 && one.try_add(&y).unwrap().exact_sign() > 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: Rational, b: Rational, d: u32) -> QuadScalar {
        QuadScalar::new(a, b, d).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn as_i64(v: Vec<BigInt>) -> Vec<i64> {
        v.into_iter().map(|b| i64::try_from(b).unwrap()).collect()
    }

    /// Independent floor-and-invert reference using 60-digit scaled integers.
    fn reference_cf(a: Rational, b: Rational, d: u32, k: usize) -> Vec<i64> {
        let scale = BigInt::from(10).pow(60);
        let sqrt_d = (BigInt::from(d) * &scale * &scale).sqrt();
        let num = a.numer() * b.denom() * &scale + b.numer() * a.denom() * &sqrt_d;
        let den = a.denom() * b.denom() * &scale;
        let mut x = Rational::new(num, den);
        let mut out = Vec::new();
        for _ in 0..k {
            let m = x.floor();
            out.push(i64::try_from(m.to_integer()).unwrap());
            x = Rational::one() / (x - m);
        }
        out
    }

    #[test]
    fn sqrt2() {
        let x = q(r(0, 1), r(1, 1), 2);
        assert_eq!(as_i64(continued_fraction(&x, 5).unwrap()), vec![1, 2, 2, 2, 2]);
        assert_eq!(reference_cf(r(0, 1), r(1, 1), 2, 5), vec![1, 2, 2, 2, 2]);
    }

    #[test]
    fn golden_ratio() {
        let x = q(r(1, 2), r(1, 2), 5);
        assert_eq!(as_i64(continued_fraction(&x, 5).unwrap()), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn two_plus_sqrt2() {
        let x = q(r(2, 1), r(1, 1), 2);
        let expected = reference_cf(r(2, 1), r(1, 1), 2, 4);
        assert_eq!(expected, vec![3, 2, 2, 2]);
        assert_eq!(as_i64(continued_fraction(&x, 4).unwrap()), expected);
    }

    #[test]
    fn matches_reference_on_assorted_surds() {
        for (a, b, d) in [(r(3, 7), r(2, 5), 3), (r(1, 1), r(1, 3), 7), (r(5, 2), r(-1, 4), 11)] {
            let x = q(a.clone(), b.clone(), d);
            assert_eq!(as_i64(continued_fraction(&x, 12).unwrap()), reference_cf(a, b, d, 12));
        }
    }

    #[test]
    fn rational_input_rejected() {
        let x = QuadScalar::from_rational(r(3, 2), 2);
        assert_eq!(continued_fraction(&x, 3), Err(ScalarError::RationalInput));
    }

    #[test]
    fn convergents_of_sqrt2() {
        let x = q(r(0, 1), r(1, 1), 2);
        let cs = convergents(&continued_fraction(&x, 6).unwrap());
        let pairs: Vec<(i64, i64)> = cs
            .iter()
            .map(|(p, q)| (i64::try_from(p.clone()).unwrap(), i64::try_from(q.clone()).unwrap()))
            .collect();
        assert_eq!(pairs, vec![(1, 1), (3, 2), (7, 5), (17, 12), (41, 29), (99, 70)]);
        for (p, qq) in &cs {
            assert!(is_good_approximation(&x, p, qq));
        }
    }
}
