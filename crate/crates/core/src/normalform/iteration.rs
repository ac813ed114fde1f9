//! Order-by-order normalization of `H + tQ`.

use serde::ser::SerializeMap;
use serde::Serialize;

use crate::scalar::{CertifiedDecimal, Scalar};
use crate::series::{flow_apply_tracked, Generator, PoissonSeries, TermKey};

use super::{determinant, homological_solve, solve_linear, IntegrableHamiltonian, NormalFormError};

/// What happened at one power of `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderDiagnostics {
    pub order: u32,
    pub eliminated: usize,
    pub smallest_denominator: Option<CertifiedDecimal>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormResult {
    /// Applied left to right to `H + tQ`.
    pub generators: Vec<Generator>,
    /// The transformed Hamiltonian.
    pub normal: PoissonSeries,
    /// The `q`- and `p`-free part of positive `t`-degree.
    pub casimir: PoissonSeries,
    /// `normal − H − casimir`.
    pub remainder: PoissonSeries,
    pub dropped_terms: usize,
    pub diagnostics: Vec<OrderDiagnostics>,
}

impl NormalFormResult {
    /// Coefficients `c_0, …, c_Dt` of `c(t)`.
    pub fn casimir_coefficients(&self) -> Vec<Scalar> {
        let n = self.casimir.n();
        (0..=self.casimir.trunc().dt)
            .map(|k| self.casimir.coeff(&TermKey::new(vec![0; n], vec![0; n], k)))
            .collect()
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        match self {
            Generator::Hamiltonian(s) => {
                map.serialize_entry("kind", "hamiltonian")?;
                map.serialize_entry("order", &s.min_t_degree())?;
                map.serialize_entry("series", s)?;
            }
            Generator::Translation { order, shift } => {
                map.serialize_entry("kind", "translation")?;
                map.serialize_entry("order", order)?;
                map.serialize_entry("shift", shift)?;
            }
        }
        map.end()
    }
}

impl Serialize for NormalFormResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(7))?;
        map.serialize_entry("generators", &self.generators)?;
        map.serialize_entry("casimir_coefficients", &self.casimir_coefficients())?;
        map.serialize_entry("casimir", &self.casimir)?;
        map.serialize_entry("remainder", &self.remainder)?;
        map.serialize_entry("normal", &self.normal)?;
        map.serialize_entry("dropped_terms", &self.dropped_terms)?;
        map.serialize_entry("diagnostics", &self.diagnostics)?;
        map.end()
    }
}

/// `H + tQ`, refusing perturbation terms that `t·` would push out of the window.
fn deformation(h: &IntegrableHamiltonian, q: &PoissonSeries) -> Result<PoissonSeries, NormalFormError> {
    let hs = h.series();
    if hs.space() != q.space() {
        return Err(crate::series::SeriesError::ContextMismatch("H and Q".into()).into());
    }
    if let Some((key, _)) = q.terms().find(|(k, _)| k.t + 1 > q.trunc().dt) {
        return Err(NormalFormError::TruncationExceeded(format!("t·({key}) exceeds t-degree {}", q.trunc().dt)));
    }
    Ok(hs.add(&q.shift_t(1))?)
}

fn split_result(
    h: &IntegrableHamiltonian,
    generators: Vec<Generator>,
    normal: PoissonSeries,
    dropped_terms: usize,
    diagnostics: Vec<OrderDiagnostics>,
) -> Result<NormalFormResult, NormalFormError> {
    let casimir = normal.filter(|k| k.is_q_free() && k.is_constant_in_p() && k.t >= 1);
    let remainder = normal.sub(h.series())?.sub(&casimir)?;
    Ok(NormalFormResult { generators, normal, casimir, remainder, dropped_terms, diagnostics })
}

/// Removes all `q`-dependence from `H + tQ` through `t`-degree `Dt`, one hamiltonian
/// generator per order. Requires `ω` nonresonant on every lattice vector met.
pub fn formal_normal_form(h: &IntegrableHamiltonian, q: &PoissonSeries) -> Result<NormalFormResult, NormalFormError> {
    let mut current = deformation(h, q)?;
    let mut generators = Vec::new();
    let mut diagnostics = Vec::new();
    let mut dropped = 0;
    let dp = q.trunc().dp;
    for order in 1..=q.trunc().dt {
        let defect = current.filter(|k| k.t == order && !k.is_q_free());
        if defect.is_zero() {
            continue;
        }
        let sol = homological_solve(h, &defect, dp)?;
        let gen = Generator::Hamiltonian(sol.generator);
        current = flow_apply_tracked(&gen, &current, &mut dropped)?;
        diagnostics.push(OrderDiagnostics {
            order,
            eliminated: sol.eliminated,
            smallest_denominator: sol.smallest_denominator.as_ref().map(Scalar::certified),
        });
        generators.push(gen);
    }
    split_result(h, generators, current, dropped, diagnostics)
}

/// Brings `H + tQ` to `H + c(t) + (terms with |J| ≥ 2 and k ≥ 1)`.
///
/// Per order `t^n`: the `q`-dependent part of `p`-degree ≤ 1 is removed by a hamiltonian
/// generator (degree 0 first, then degree 1 including the cross terms created through `α`);
/// the remaining averaged linear part `b·p` is removed by the translation
/// `p ↦ p − (2α)⁻¹ b tⁿ`; the constant part is collected into `c(t)`.
pub fn kolmogorov_normal_form(h: &IntegrableHamiltonian, q: &PoissonSeries) -> Result<NormalFormResult, NormalFormError> {
    let ctx = q.context();
    let n = h.n();
    let two_alpha: Vec<Vec<Scalar>> = h.alpha().iter().map(|row| row.iter().map(|a| a.mul_int(2)).collect()).collect();
    if determinant(&two_alpha, ctx).is_zero() {
        return Err(NormalFormError::DegenerateAlpha);
    }
    let mut current = deformation(h, q)?;
    let mut generators = Vec::new();
    let mut diagnostics = Vec::new();
    let mut dropped = 0;
    for order in 1..=q.trunc().dt {
        let mut eliminated = 0;
        let mut smallest = None;
        let defect = current.filter(|k| k.t == order && !k.is_q_free() && k.p_degree() <= 1);
        if !defect.is_zero() {
            let sol = homological_solve(h, &defect, 1)?;
            eliminated += sol.eliminated;
            smallest = sol.smallest_denominator.as_ref().map(Scalar::certified);
            let gen = Generator::Hamiltonian(sol.generator);
            current = flow_apply_tracked(&gen, &current, &mut dropped)?;
            generators.push(gen);
        }
        let b: Vec<Scalar> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                current.coeff(&TermKey::new(vec![0; n], e, order))
            })
            .collect();
        if b.iter().any(|x| !x.is_zero()) {
            let neg_b: Vec<Scalar> = b.iter().map(|x| -x).collect();
            let shift = solve_linear(&two_alpha, &neg_b).ok_or(NormalFormError::DegenerateAlpha)?;
            eliminated += b.iter().filter(|x| !x.is_zero()).count();
            let gen = Generator::Translation { order, shift };
            current = flow_apply_tracked(&gen, &current, &mut dropped)?;
            generators.push(gen);
        }
        if eliminated > 0 {
            diagnostics.push(OrderDiagnostics { order, eliminated, smallest_denominator: smallest });
        }
    }
    let result = split_result(h, generators, current, dropped, diagnostics)?;
    if let Some((key, _)) = result.remainder.terms().find(|(k, _)| k.p_degree() < 2 || k.t == 0) {
        return Err(NormalFormError::TruncationExceeded(format!("term {key} survived normalization")));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarContext;
    use crate::series::{compose_flows, BracketMode, SeriesSpace, TruncationSpec};

    fn mono(s: &SeriesSpace, q: &[i32], p: &[u32], t: u32, c: Scalar) -> PoissonSeries {
        s.monomial(q.to_vec(), p.to_vec(), t, c).unwrap()
    }

    #[test]
    fn one_dimensional_kolmogorov() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 3, 2, 2), BracketMode::Torus);
        let c = s.context;
        let h = s.p(0).scale(&c.from_int(3)).unwrap().add(&mono(&s, &[0], &[2], 0, c.from_ratio(1, 2))).unwrap();
        let h = IntegrableHamiltonian::new(h).unwrap();
        let q = s.p(0);
        let res = kolmogorov_normal_form(&h, &q).unwrap();
        assert_eq!(res.generators, vec![Generator::Translation { order: 1, shift: vec![c.from_int(-1)] }]);
        assert_eq!(res.casimir_coefficients(), vec![c.zero(), c.from_int(-3), c.from_ratio(-1, 2)]);
        assert!(res.remainder.is_zero());
        // substitution oracle: H(p − t) + t(p − t)
        let p_shift = s.p(0).sub(&s.t()).unwrap();
        let oracle = p_shift.scale(&c.from_int(3)).unwrap()
            .add(&p_shift.pow(2).unwrap().scale(&c.from_ratio(1, 2)).unwrap()).unwrap()
            .add(&s.t().mul(&p_shift).unwrap()).unwrap();
        assert_eq!(res.normal, oracle);
    }

    #[test]
    fn zero_perturbation() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 3, 2, 2), BracketMode::Torus);
        let c = s.context;
        let h = s.p(0).add(&mono(&s, &[0], &[2], 0, c.one())).unwrap();
        let h = IntegrableHamiltonian::new(h).unwrap();
        let res = kolmogorov_normal_form(&h, &s.zero()).unwrap();
        assert!(res.generators.is_empty());
        assert!(res.casimir.is_zero());
        assert!(res.remainder.is_zero());
    }

    #[test]
    fn degenerate_alpha() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 3, 2, 2), BracketMode::Torus);
        let h = IntegrableHamiltonian::new(s.p(0).scale(&s.context.from_int(3)).unwrap()).unwrap();
        assert_eq!(kolmogorov_normal_form(&h, &s.p(0)), Err(NormalFormError::DegenerateAlpha));
    }

    #[test]
    fn formal_example_is_q_free_and_reproducible() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 5, 2, 3), BracketMode::Torus);
        let c = s.context;
        let h = IntegrableHamiltonian::new(s.p(0)).unwrap();
        let q = mono(&s, &[0], &[2], 0, c.one()).add(&mono(&s, &[1], &[1], 0, c.one())).unwrap().add(&mono(&s, &[-1], &[1], 0, c.one())).unwrap();
        let res = formal_normal_form(&h, &q).unwrap();
        assert!(res.normal.is_q_free());
        assert_eq!(res.normal.t_part(1), mono(&s, &[0], &[2], 1, c.one()));
        let input = h.series().add(&q.shift_t(1)).unwrap();
        assert_eq!(compose_flows(&res.generators, &input).unwrap(), res.normal);
    }

    #[test]
    fn perturbation_at_top_order_is_rejected() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 2, 1, 1), BracketMode::Torus);
        let h = IntegrableHamiltonian::new(s.p(0)).unwrap();
        let q = mono(&s, &[1], &[0], 1, s.context.one());
        assert!(matches!(formal_normal_form(&h, &q), Err(NormalFormError::TruncationExceeded(_))));
    }
}
