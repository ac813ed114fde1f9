use crate::scalar::Scalar;
use crate::series::{BracketMode, PoissonSeries};

use super::{pairing, IntegrableHamiltonian, NormalFormError};

/// Output of [`homological_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct HomologicalSolution {
    /// Generator supported on `I ≠ 0` with `p`-degree at most the cap.
    pub generator: PoissonSeries,
    /// `{H,S} + R`: the averaged part of `R` plus terms of `p`-degree above the cap.
    pub residual: PoissonSeries,
    /// Number of monomials of `R` and of the induced cross terms that were eliminated.
    pub eliminated: usize,
    /// Smallest `|(ω,I)|` divided by.
    pub smallest_denominator: Option<Scalar>,
}

/// Finds `S` with `{H,S} + R − residual = 0` where the residual has no `q`-dependent terms of
/// `p`-degree `≤ p_cap`.
///
/// Since `H ∈ K[[p]]`, `{H, q^I p^J} = ((ω,I) + O(p)) q^I p^J`, so the coefficients of `S`
/// are found degree by degree: at degree `m`, the current defect `{H,S} + R` (which already
/// contains the cross terms produced by the lower-degree part of `S` through the nonlinear
/// part of `H`) is divided by `(ω,I)`.
pub fn homological_solve(
    h: &IntegrableHamiltonian,
    r: &PoissonSeries,
    p_cap: u32,
) -> Result<HomologicalSolution, NormalFormError> {
    if r.mode() != BracketMode::Torus {
        return Err(NormalFormError::Unsupported("homological equation is solved in torus mode".into()));
    }
    let hs = h.series();
    if hs.space() != r.space() {
        return Err(crate::series::SeriesError::ContextMismatch("H and R".into()).into());
    }
    let omega = h.omega();
    let mut s = r.space().zero();
    let mut eliminated = 0;
    let mut smallest: Option<Scalar> = None;
    let mut defect = r.clone();
    for m in 0..=p_cap.min(r.trunc().dp) {
        let part = defect.filter(|k| !k.is_q_free() && k.p_degree() == m);
        if part.is_zero() {
            continue;
        }
        let mut step = r.space().zero();
        for (key, c) in part.terms() {
            let denom = pairing(omega, &key.q);
            if denom.exact_sign() == 0 {
                return Err(NormalFormError::ResonantDenominator { lattice: key.q.clone(), order: key.t });
            }
            let abs = denom.abs();
            if smallest.as_ref().map_or(true, |cur| abs.try_sub(cur).map(|d| d.exact_sign() < 0).unwrap_or(false)) {
                smallest = Some(abs);
            }
            step.insert(key.clone(), -c.try_div(&denom)?)?;
            eliminated += 1;
        }
        s = s.add(&step)?;
        defect = defect.add(&hs.bracket(&step)?)?;
    }
    Ok(HomologicalSolution { generator: s, residual: defect, eliminated, smallest_denominator: smallest })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarContext;
    use crate::series::{SeriesSpace, TruncationSpec};

    fn mono(s: &SeriesSpace, q: &[i32], p: &[u32], t: u32, c: Scalar) -> PoissonSeries {
        s.monomial(q.to_vec(), p.to_vec(), t, c).unwrap()
    }

    #[test]
    fn one_dimensional_example() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 3, 2, 3), BracketMode::Torus);
        let one = s.context.one();
        let h = IntegrableHamiltonian::new(s.p(0)).unwrap();
        let r = mono(&s, &[1], &[1], 1, one.clone()).add(&mono(&s, &[-1], &[1], 1, one.clone())).unwrap();
        let sol = homological_solve(&h, &r, 3).unwrap();
        let expected = mono(&s, &[-1], &[1], 1, one.clone()).sub(&mono(&s, &[1], &[1], 1, one)).unwrap();
        assert_eq!(sol.generator, expected);
        assert!(sol.residual.is_zero());
        // bracket oracle: {H,S} = −R
        assert_eq!(h.series().bracket(&sol.generator).unwrap(), r.neg());
    }

    #[test]
    fn sqrt2_pole() {
        let ctx = ScalarContext::quadratic(2).unwrap();
        let s = SeriesSpace::new(ctx, TruncationSpec::new(2, 2, 1, 1), BracketMode::Torus);
        let sqrt2 = ctx.parse("[0, 1, 2]").unwrap();
        let h = s.p(0).add(&s.p(1).scale(&sqrt2).unwrap()).unwrap();
        let h = IntegrableHamiltonian::new(h).unwrap();
        let r = mono(&s, &[1, -1], &[0, 0], 1, ctx.one());
        let sol = homological_solve(&h, &r, 2).unwrap();
        // {H, q1 q2^-1} = (1 − √2) q1 q2^-1, so S = t q1 q2^-1 / (√2 − 1)
        let coeff = ctx.parse("[-1, 1, 2]").unwrap().inverse().unwrap();
        assert_eq!(sol.generator, mono(&s, &[1, -1], &[0, 0], 1, coeff));
        assert!(sol.residual.is_zero());
        assert_eq!(sol.smallest_denominator, Some(ctx.parse("[-1, 1, 2]").unwrap()));
    }

    #[test]
    fn averaged_input_is_untouched() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 3, 2, 3), BracketMode::Torus);
        let h = IntegrableHamiltonian::new(s.p(0)).unwrap();
        let r = mono(&s, &[0], &[2], 1, s.context.from_int(5));
        let sol = homological_solve(&h, &r, 3).unwrap();
        assert!(sol.generator.is_zero());
        assert_eq!(sol.residual, r);
    }

    #[test]
    fn nonlinear_h_cross_terms_are_absorbed() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 3, 1, 2), BracketMode::Torus);
        let h = s.p(0).add(&s.p(0).pow(2).unwrap()).unwrap();
        let h = IntegrableHamiltonian::new(h).unwrap();
        let r = mono(&s, &[1], &[0], 1, s.context.one()).add(&mono(&s, &[-2], &[1], 1, s.context.from_int(3))).unwrap();
        let sol = homological_solve(&h, &r, 3).unwrap();
        assert!(sol.residual.is_zero());
        let check = h.series().bracket(&sol.generator).unwrap().add(&r).unwrap();
        assert!(check.is_zero());
    }

    #[test]
    fn resonance_reported() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(2, 2, 1, 2), BracketMode::Torus);
        let h = s.p(0).sub(&s.p(1).scale(&s.context.from_int(2)).unwrap()).unwrap();
        let h = IntegrableHamiltonian::new(h).unwrap();
        let r = mono(&s, &[2, 1], &[0, 0], 1, s.context.one());
        assert_eq!(
            homological_solve(&h, &r, 2),
            Err(NormalFormError::ResonantDenominator { lattice: vec![2, 1], order: 1 })
        );
    }
}
