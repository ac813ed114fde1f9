//! Ring operations and the Poisson bracket.

use std::collections::HashMap;

use crate::scalar::Scalar;

use super::{BracketMode, PoissonSeries, SeriesError, TermKey};

fn collect(space: super::SeriesSpace, acc: HashMap<TermKey, Scalar>) -> PoissonSeries {
    let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    PoissonSeries::from_parts(space, terms)
}

fn add_into(acc: &mut HashMap<TermKey, Scalar>, key: TermKey, c: Scalar) {
    match acc.get_mut(&key) {
        Some(v) => *v = &*v + &c,
        None => {
            acc.insert(key, c);
        }
    }
}

impl PoissonSeries {
    pub fn add(&self, other: &PoissonSeries) -> Result<PoissonSeries, SeriesError> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.accumulate(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PoissonSeries) -> Result<PoissonSeries, SeriesError> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.accumulate(k.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> PoissonSeries {
        let terms = self.terms().map(|(k, c)| (k.clone(), -c)).collect();
        PoissonSeries::from_parts(*self.space(), terms)
    }

    /// Multiplies every coefficient by `s` (lifted into the series context).
    pub fn scale(&self, s: &Scalar) -> Result<PoissonSeries, SeriesError> {
        let s = self.context().lift(s)?;
        if s.is_zero() {
            return Ok(self.space().zero());
        }
        let terms = self.terms().map(|(k, c)| (k.clone(), c * &s)).collect();
        Ok(PoissonSeries::from_parts(*self.space(), terms))
    }

    pub fn mul(&self, other: &PoissonSeries) -> Result<PoissonSeries, SeriesError> {
        self.mul_tracked(other, &mut 0)
    }

    /// Truncated product; `laurent_drops` counts contributions discarded only because their
    /// Laurent exponent exceeds the support bound.
    pub fn mul_tracked(&self, other: &PoissonSeries, laurent_drops: &mut usize) -> Result<PoissonSeries, SeriesError> {
        self.same_space(other)?;
        let trunc = *self.trunc();
        let mut acc: HashMap<TermKey, Scalar> = HashMap::new();
        for (ka, ca) in self.terms() {
            for (kb, cb) in other.terms() {
                let t = ka.t + kb.t;
                if t > trunc.dt {
                    continue;
                }
                let p: Vec<u32> = ka.p.iter().zip(&kb.p).map(|(a, b)| a + b).collect();
                if p.iter().sum::<u32>() > trunc.dp {
                    continue;
                }
                let q: Vec<i32> = ka.q.iter().zip(&kb.q).map(|(a, b)| a + b).collect();
                let key = TermKey { q, p, t };
                if !trunc.admits(&key) {
                    *laurent_drops += 1;
                    continue;
                }
                add_into(&mut acc, key, ca * cb);
            }
        }
        Ok(collect(*self.space(), acc))
    }

    pub fn pow(&self, e: u32) -> Result<PoissonSeries, SeriesError> {
        let mut out = self.space().one();
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// The Poisson bracket `{self, other}`.
    pub fn bracket(&self, other: &PoissonSeries) -> Result<PoissonSeries, SeriesError> {
        self.bracket_tracked(other, &mut 0)
    }

    /// Torus mode: `Σ_j ∂_{p_j}f · q_j∂_{q_j}g − q_j∂_{q_j}f · ∂_{p_j}g`.
    /// Symplectic mode: the same with `∂_{q_j}` in place of `q_j∂_{q_j}`.
    pub fn bracket_tracked(&self, other: &PoissonSeries, laurent_drops: &mut usize) -> Result<PoissonSeries, SeriesError> {
        self.same_space(other)?;
        let trunc = *self.trunc();
        let symplectic = self.mode() == BracketMode::Symplectic;
        let n = self.n();
        let mut acc: HashMap<TermKey, Scalar> = HashMap::new();
        for (kf, cf) in self.terms() {
            for (kg, cg) in other.terms() {
                let t = kf.t + kg.t;
                if t > trunc.dt {
                    continue;
                }
                let p_sum: Vec<u32> = kf.p.iter().zip(&kg.p).map(|(a, b)| a + b).collect();
                let total: u32 = p_sum.iter().sum();
                if total == 0 || total - 1 > trunc.dp {
                    continue;
                }
                let q_sum: Vec<i32> = kf.q.iter().zip(&kg.q).map(|(a, b)| a + b).collect();
                let mut product: Option<Scalar> = None;
                for j in 0..n {
                    let factor = kf.p[j] as i64 * kg.q[j] as i64 - kf.q[j] as i64 * kg.p[j] as i64;
                    if factor == 0 {
                        continue;
                    }
                    let mut p = p_sum.clone();
                    p[j] -= 1;
                    let mut q = q_sum.clone();
                    if symplectic {
                        q[j] -= 1;
                    }
                    let key = TermKey { q, p, t };
                    if !trunc.admits(&key) {
                        *laurent_drops += 1;
                        continue;
                    }
                    let base = product.get_or_insert_with(|| cf * cg);
                    add_into(&mut acc, key, base.mul_int(factor));
                }
            }
        }
        Ok(collect(*self.space(), acc))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{SeriesSpace, TruncationSpec};
    use super::*;
    use crate::scalar::ScalarContext;

    fn torus1(dp: u32) -> SeriesSpace {
        SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, dp, 2, 3), BracketMode::Torus)
    }

    #[test]
    fn laurent_units_cancel() {
        let s = torus1(2);
        let q = s.q_power(&[1]).unwrap();
        let qi = s.q_power(&[-1]).unwrap();
        assert_eq!(q.mul(&qi).unwrap(), s.one());
    }

    #[test]
    fn difference_of_squares() {
        let s = torus1(2);
        let p = s.p(0);
        let one = s.one();
        let lhs = one.add(&p).unwrap().mul(&one.sub(&p).unwrap()).unwrap();
        let rhs = one.sub(&p.mul(&p).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn products_past_dp_vanish() {
        let s = torus1(3);
        let p3 = s.p(0).pow(3).unwrap();
        assert!(!p3.is_zero());
        assert!(p3.mul(&s.p(0)).unwrap().is_zero());
    }

    #[test]
    fn laurent_drops_are_counted() {
        let s = torus1(2);
        let q3 = s.q_power(&[3]).unwrap();
        let q = s.q_power(&[1]).unwrap();
        let mut drops = 0;
        assert!(q3.mul_tracked(&q, &mut drops).unwrap().is_zero());
        assert_eq!(drops, 1);
    }

    #[test]
    fn torus_bracket_basics() {
        let s = torus1(2);
        let p = s.p(0);
        let q = s.q_power(&[1]).unwrap();
        let qi = s.q_power(&[-1]).unwrap();
        assert_eq!(p.bracket(&q).unwrap(), q);
        assert_eq!(p.bracket(&qi).unwrap(), qi.neg());
        assert!(p.bracket(&s.t()).unwrap().is_zero());
    }

    #[test]
    fn symplectic_bracket_of_pq() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 8, 0, 8), BracketMode::Symplectic);
        let pq = s.monomial(vec![1], vec![1], 0, s.context.one()).unwrap();
        assert_eq!(s.p(0).bracket(&s.q_power(&[1]).unwrap()).unwrap(), s.one());
        for i in 0..4u32 {
            for j in 0..4i32 {
                let m = s.monomial(vec![j], vec![i], 0, s.context.one()).unwrap();
                let expected = m.scale(&s.context.from_int(i as i64 - j as i64)).unwrap();
                assert_eq!(m.bracket(&pq).unwrap(), expected);
                assert_eq!(pq.bracket(&m).unwrap(), expected.neg());
            }
        }
    }

    #[test]
    fn mismatched_spaces_rejected() {
        let a = torus1(2).p(0);
        let b = torus1(3).p(0);
        assert!(matches!(a.add(&b), Err(SeriesError::ContextMismatch(_))));
        assert!(matches!(a.bracket(&b), Err(SeriesError::ContextMismatch(_))));
    }
}
