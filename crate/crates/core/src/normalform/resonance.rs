use crate::lattice::for_each_half_ball;
use crate::scalar::{Scalar, ScalarContext};

/// The euclidean pairing `(ω,I) = Σ ω_i I_i`.
pub fn pairing(omega: &[Scalar], lattice: &[i32]) -> Scalar {
    let ctx = omega.first().map(Scalar::context).unwrap_or(ScalarContext::Rational);
    omega.iter().zip(lattice).fold(ctx.zero(), |acc, (w, &i)| {
        if i == 0 {
            acc
        } else {
            &acc + &w.mul_int(i as i64)
        }
    })
}

/// All resonances `I` with `0 < ‖I‖_∞ ≤ cutoff`, one per `±I`, first nonzero entry positive.
pub fn resonances(omega: &[Scalar], cutoff: u32) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for_each_half_ball(omega.len(), cutoff, |v| {
        if pairing(omega, v).exact_sign() == 0 {
            out.push(v.to_vec());
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_frequencies() {
        let ctx = ScalarContext::Rational;
        let res = resonances(&[ctx.from_int(1), ctx.from_int(-2)], 3);
        assert!(res.contains(&vec![2, 1]));
        assert_eq!(res, vec![vec![2, 1]]);
        assert_eq!(resonances(&[ctx.one(), ctx.one()], 1), vec![vec![1, -1]]);
    }

    #[test]
    fn sqrt2_is_nonresonant() {
        let ctx = ScalarContext::quadratic(2).unwrap();
        let omega = [ctx.one(), ctx.parse("[0, 1, 2]").unwrap()];
        assert!(resonances(&omega, 50).is_empty());
    }
}
