//! Formal flows: the Poisson automorphisms `e^{ad_S}` and the `p`-translations.

use num_bigint::BigInt;
use num_integer::binomial;

use crate::scalar::{Rational, Scalar};

use super::{PoissonSeries, SeriesError, TermKey};

/// A generator of a central Poisson automorphism.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// Flow of the inner derivation `f ↦ {f, S}`; `S` must be divisible by `t`.
    Hamiltonian(PoissonSeries),
    /// Flow of `Σ_j d_j t^order ∂_{p_j}`, i.e. the substitution `p_j ↦ p_j + d_j t^order`.
    Translation { order: u32, shift: Vec<Scalar> },
}

impl Generator {
    pub fn validate(&self, n: usize) -> Result<(), SeriesError> {
        match self {
            Generator::Hamiltonian(s) => match s.min_t_degree() {
                Some(0) => Err(SeriesError::GeneratorOrderViolation(0)),
                _ => Ok(()),
            },
            Generator::Translation { order, shift } => {
                if *order == 0 || shift.len() != n {
                    Err(SeriesError::InvalidTranslation { expected: n })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// The generator of the inverse automorphism.
    pub fn inverse(&self) -> Generator {
        match self {
            Generator::Hamiltonian(s) => Generator::Hamiltonian(s.neg()),
            Generator::Translation { order, shift } => Generator::Translation {
                order: *order,
                shift: shift.iter().map(|d| -d).collect(),
            },
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Generator::Hamiltonian(s) => s.is_zero(),
            Generator::Translation { shift, .. } => shift.iter().all(Scalar::is_zero),
        }
    }

    /// Lowest `t`-degree the generator acts at.
    pub fn order(&self) -> Option<u32> {
        match self {
            Generator::Hamiltonian(s) => s.min_t_degree(),
            Generator::Translation { order, .. } => Some(*order),
        }
    }
}

pub fn flow_apply(gen: &Generator, f: &PoissonSeries) -> Result<PoissonSeries, SeriesError> {
    flow_apply_tracked(gen, f, &mut 0)
}

/// Applies the automorphism generated by `gen` to `f`, exactly modulo truncation.
pub fn flow_apply_tracked(gen: &Generator, f: &PoissonSeries, laurent_drops: &mut usize) -> Result<PoissonSeries, SeriesError> {
    gen.validate(f.n())?;
    match gen {
        Generator::Hamiltonian(s) => {
            f.same_space(s)?;
            hamiltonian_flow(s, f, laurent_drops)
        }
        Generator::Translation { order, shift } => translate(f, *order, shift),
    }
}

/// `Σ_m ad_S^m(f)/m!`; terminates because each `ad_S` raises the `t`-degree.
fn hamiltonian_flow(s: &PoissonSeries, f: &PoissonSeries, laurent_drops: &mut usize) -> Result<PoissonSeries, SeriesError> {
    let mut acc = f.clone();
    let mut term = f.clone();
    let mut m: i64 = 1;
    while !s.is_zero() {
        term = term.bracket_tracked(s, laurent_drops)?;
        if term.is_zero() {
            break;
        }
        term = term.scale(&Scalar::Rational(Rational::new(BigInt::from(1), BigInt::from(m))))?;
        acc = acc.add(&term)?;
        m += 1;
    }
    Ok(acc)
}

fn translate(f: &PoissonSeries, order: u32, shift: &[Scalar]) -> Result<PoissonSeries, SeriesError> {
    let ctx = f.context();
    let shift: Vec<Scalar> = shift.iter().map(|d| ctx.lift(d)).collect::<Result<_, _>>()?;
    let dt = f.trunc().dt;
    let n = f.n();
    let mut out = f.space().zero();
    for (key, c) in f.terms() {
        // expand Π_j (p_j + d_j t^order)^{J_j}, one multi-index a ≤ J at a time
        let mut a = vec![0u32; n];
        loop {
            let lowered: u32 = key.p.iter().zip(&a).map(|(j, a)| j - a).sum();
            let t = key.t + order * lowered;
            if t <= dt {
                let mut coeff = c.clone();
                for j in 0..n {
                    let e = key.p[j] - a[j];
                    if e > 0 {
                        let binom = binomial(BigInt::from(key.p[j]), BigInt::from(a[j]));
                        coeff = coeff.mul_rational(&Rational::from_integer(binom));
                        for _ in 0..e {
                            coeff = &coeff * &shift[j];
                        }
                    }
                }
                out.accumulate(TermKey { q: key.q.clone(), p: a.clone(), t }, coeff);
            }
            // odometer over 0 ≤ a_j ≤ J_j
            let mut j = 0;
            while j < n {
                if a[j] < key.p[j] {
                    a[j] += 1;
                    break;
                }
                a[j] = 0;
                j += 1;
            }
            if j == n {
                break;
            }
        }
    }
    Ok(out)
}

pub fn compose_flows(gens: &[Generator], f: &PoissonSeries) -> Result<PoissonSeries, SeriesError> {
    compose_flows_tracked(gens, f, &mut 0)
}

/// Applies `gens` left to right: the first generator acts first.
pub fn compose_flows_tracked(gens: &[Generator], f: &PoissonSeries, laurent_drops: &mut usize) -> Result<PoissonSeries, SeriesError> {
    gens.iter().try_fold(f.clone(), |acc, g| flow_apply_tracked(g, &acc, laurent_drops))
}

#[cfg(test)]
mod tests {
    use super::super::{BracketMode, SeriesSpace, TruncationSpec};
    use super::*;
    use crate::scalar::ScalarContext;

    fn space() -> SeriesSpace {
        SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 4, 3, 4), BracketMode::Torus)
    }

    fn mono(s: &SeriesSpace, q: i32, p: u32, t: u32, c: i64) -> PoissonSeries {
        s.monomial(vec![q], vec![p], t, s.context.from_int(c)).unwrap()
    }

    #[test]
    fn zero_generator_is_identity() {
        let s = space();
        let f = mono(&s, 1, 2, 0, 3).add(&s.p(0)).unwrap();
        assert_eq!(flow_apply(&Generator::Hamiltonian(s.zero()), &f).unwrap(), f);
    }

    #[test]
    fn t_is_fixed() {
        let s = space();
        let gens = [
            Generator::Hamiltonian(mono(&s, 1, 1, 1, 2)),
            Generator::Translation { order: 1, shift: vec![s.context.from_int(5)] },
        ];
        for g in &gens {
            assert_eq!(flow_apply(g, &s.t()).unwrap(), s.t());
        }
    }

    #[test]
    fn order_zero_generator_rejected() {
        let s = space();
        let g = Generator::Hamiltonian(mono(&s, 1, 0, 0, 1));
        assert_eq!(flow_apply(&g, &s.p(0)), Err(SeriesError::GeneratorOrderViolation(0)));
        let bad = Generator::Translation { order: 0, shift: vec![s.context.one()] };
        assert!(flow_apply(&bad, &s.p(0)).is_err());
    }

    #[test]
    fn translation_substitutes() {
        let s = space();
        // (p + 2t)^2 = p^2 + 4tp + 4t^2
        let g = Generator::Translation { order: 1, shift: vec![s.context.from_int(2)] };
        let out = flow_apply(&g, &mono(&s, 0, 2, 0, 1)).unwrap();
        let expected = mono(&s, 0, 2, 0, 1).add(&mono(&s, 0, 1, 1, 4)).unwrap().add(&mono(&s, 0, 0, 2, 4)).unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn first_order_terms_removed() {
        // S = t(pq⁻¹ − pq) applied to f = p + tp² + tpq + tpq⁻¹
        let s = space();
        let gen = Generator::Hamiltonian(mono(&s, -1, 1, 1, 1).sub(&mono(&s, 1, 1, 1, 1)).unwrap());
        let f = s.p(0).add(&mono(&s, 0, 2, 1, 1)).unwrap().add(&mono(&s, 1, 1, 1, 1)).unwrap().add(&mono(&s, -1, 1, 1, 1)).unwrap();
        let out = flow_apply(&gen, &f).unwrap();
        assert!(out.coeff_of(&[1], &[1], 1).is_zero());
        assert!(out.coeff_of(&[-1], &[1], 1).is_zero());
        assert_eq!(out.t_part(1), mono(&s, 0, 2, 1, 1));
    }

    #[test]
    fn inverse_undoes() {
        let s = space();
        let f = mono(&s, 1, 2, 0, 3).add(&mono(&s, -1, 1, 1, 1)).unwrap();
        for g in [
            Generator::Hamiltonian(mono(&s, 1, 1, 1, 2).add(&mono(&s, -1, 0, 1, 1)).unwrap()),
            Generator::Translation { order: 1, shift: vec![s.context.from_ratio(-1, 3)] },
        ] {
            let back = compose_flows(&[g.clone(), g.inverse()], &f).unwrap();
            assert_eq!(back, f);
        }
        assert_eq!(compose_flows(&[], &f).unwrap(), f);
    }
}
