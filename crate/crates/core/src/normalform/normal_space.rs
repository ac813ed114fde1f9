//! Classes in the normal space `N(H,I) = A/({H,A} + I² + K)`.

use serde::Serialize;

use crate::scalar::Scalar;
use crate::series::{BracketMode, PoissonSeries, SeriesError, TermKey};

use super::{homological_solve, IntegrableHamiltonian, NormalFormError};

/// Witnesses for `f = {H,g} + i + c + Σ ν_j b_j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassCertificate {
    pub g: PoissonSeries,
    pub bracket: PoissonSeries,
    /// Element of `I²`.
    pub ideal_part: PoissonSeries,
    pub constant: PoissonSeries,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalSpaceClass {
    /// Coordinates in the basis `[p_1], …, [p_n]` (torus) or `[pq]` (hyperbolic).
    pub nu: Vec<Scalar>,
    pub certificate: ClassCertificate,
}

impl NormalSpaceClass {
    /// The basis representatives `p_j` (torus) or `pq` (hyperbolic) in the space of `f`.
    fn basis(f: &PoissonSeries) -> Vec<PoissonSeries> {
        let s = f.space();
        match f.mode() {
            BracketMode::Torus => (0..f.n()).map(|j| s.p(j)).collect(),
            BracketMode::Symplectic => vec![s.monomial(vec![1], vec![1], 0, s.context.one()).expect("pq fits")],
        }
    }

    /// Recomputes `{H,g}` and checks the decomposition identity exactly.
    pub fn verify(&self, h: &PoissonSeries, f: &PoissonSeries) -> Result<bool, SeriesError> {
        let cert = &self.certificate;
        if h.bracket(&cert.g)? != cert.bracket {
            return Ok(false);
        }
        if cert.ideal_part.terms().any(|(k, _)| !in_ideal_square(f.mode(), k)) {
            return Ok(false);
        }
        if cert.constant.terms().any(|(k, _)| !(k.is_q_free() && k.is_constant_in_p())) {
            return Ok(false);
        }
        let mut total = cert.bracket.add(&cert.ideal_part)?.add(&cert.constant)?;
        for (b, nu) in Self::basis(f).iter().zip(&self.nu) {
            total = total.add(&b.scale(nu)?)?;
        }
        Ok(&total == f)
    }
}

fn in_ideal_square(mode: BracketMode, k: &TermKey) -> bool {
    match mode {
        BracketMode::Torus => k.p_degree() >= 2,
        BracketMode::Symplectic => k.p[0] >= 2 && k.q[0] >= 2,
    }
}

/// Class of `f` for a nonresonant integrable `H` in torus mode; `f` must be `t`-free.
pub fn normal_space_class(h: &IntegrableHamiltonian, f: &PoissonSeries) -> Result<NormalSpaceClass, NormalFormError> {
    if f.terms().any(|(k, _)| k.t > 0) {
        return Err(NormalFormError::Unsupported("normal-space classes are computed for t-free elements".into()));
    }
    let low = f.filter(|k| !k.is_q_free() && k.p_degree() <= 1);
    let g = homological_solve(h, &low, 1)?.generator.neg();
    let bracket = h.series().bracket(&g)?;
    // f − {H,g}: averaged terms of degree ≤ 1 remain, cross terms land in I²
    let rest = f.sub(&bracket)?;
    let constant = rest.filter(|k| k.is_q_free() && k.p_degree() == 0);
    let ideal_part = rest.filter(|k| k.p_degree() >= 2);
    let n = f.n();
    let nu = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            rest.coeff(&TermKey::new(vec![0; n], e, 0))
        })
        .collect();
    if let Some((k, _)) = rest.terms().find(|(k, _)| !k.is_q_free() && k.p_degree() <= 1) {
        return Err(NormalFormError::TruncationExceeded(format!("term {k} not eliminated")));
    }
    Ok(NormalSpaceClass { nu, certificate: ClassCertificate { g, bracket, ideal_part, constant } })
}

/// Class of `f ∈ K[[q,p]]` for the hyperbolic pair `H = pq`, `I = (pq)`, as the coefficient of `[pq]`.
pub fn hyperbolic_normal_space_class(f: &PoissonSeries) -> Result<NormalSpaceClass, NormalFormError> {
    if f.mode() != BracketMode::Symplectic || f.n() != 1 {
        return Err(NormalFormError::Unsupported("the hyperbolic class needs a one-dimensional symplectic series".into()));
    }
    let s = f.space();
    let h = s.monomial(vec![1], vec![1], 0, s.context.one())?;
    let mut g = s.zero();
    let mut ideal_part = s.zero();
    let mut constant = s.zero();
    let mut nu = s.context.zero();
    for (k, c) in f.terms() {
        let (i, j) = (k.p[0] as i64, k.q[0] as i64);
        if k.q[0] < 0 {
            return Err(NormalFormError::Unsupported(format!("term {k} has a negative power of q")));
        }
        if k.t > 0 {
            return Err(NormalFormError::Unsupported("normal-space classes are computed for t-free elements".into()));
        }
        if i != j {
            // {pq, p^i q^j} = (j − i) p^i q^j
            g.insert(k.clone(), c.try_div(&s.context.from_int(j - i))?)?;
        } else if i == 0 {
            constant.insert(k.clone(), c.clone())?;
        } else if i == 1 {
            nu = c.clone();
        } else {
            ideal_part.insert(k.clone(), c.clone())?;
        }
    }
    let bracket = h.bracket(&g)?;
    Ok(NormalSpaceClass { nu: vec![nu], certificate: ClassCertificate { g, bracket, ideal_part, constant } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarContext;
    use crate::series::{SeriesSpace, TruncationSpec};

    #[test]
    fn class_of_p_is_basis_vector() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(2, 3, 0, 2), BracketMode::Torus);
        let c = s.context;
        let h = s.p(0).add(&s.p(1).scale(&c.from_int(-3)).unwrap()).unwrap();
        let h = IntegrableHamiltonian::new(h.add(&s.p(1).pow(2).unwrap()).unwrap()).unwrap();
        for j in 0..2 {
            let f = s.p(j);
            let class = normal_space_class(&h, &f).unwrap();
            let mut e = vec![c.zero(); 2];
            e[j] = c.one();
            assert_eq!(class.nu, e);
            assert!(class.certificate.g.is_zero());
            assert!(class.verify(h.series(), &f).unwrap());
        }
    }

    #[test]
    fn exact_term_has_zero_class() {
        let ctx = ScalarContext::quadratic(2).unwrap();
        let s = SeriesSpace::new(ctx, TruncationSpec::new(2, 2, 0, 1), BracketMode::Torus);
        let h = s.p(0).add(&s.p(1).scale(&ctx.parse("[0, 1, 2]").unwrap()).unwrap()).unwrap();
        let h = IntegrableHamiltonian::new(h).unwrap();
        let f = s.q_power(&[1, -1]).unwrap();
        let class = normal_space_class(&h, &f).unwrap();
        assert_eq!(class.nu, vec![ctx.zero(), ctx.zero()]);
        assert_eq!(h.series().bracket(&class.certificate.g).unwrap(), f);
        assert!(class.verify(h.series(), &f).unwrap());
    }

    #[test]
    fn mixed_element_with_nonlinear_h() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 4, 0, 2), BracketMode::Torus);
        let c = s.context;
        let h = IntegrableHamiltonian::new(s.p(0).add(&s.p(0).pow(2).unwrap()).unwrap()).unwrap();
        let f = s.q_power(&[1]).unwrap()
            .add(&s.monomial(vec![-2], vec![1], 0, c.from_int(5)).unwrap()).unwrap()
            .add(&s.p(0).scale(&c.from_int(7)).unwrap()).unwrap()
            .add(&s.constant(c.from_int(2)).unwrap()).unwrap()
            .add(&s.monomial(vec![2], vec![3], 0, c.one()).unwrap()).unwrap();
        let class = normal_space_class(&h, &f).unwrap();
        assert_eq!(class.nu, vec![c.from_int(7)]);
        assert_eq!(class.certificate.constant, s.constant(c.from_int(2)).unwrap());
        assert!(class.verify(h.series(), &f).unwrap());
    }

    #[test]
    fn hyperbolic_pair() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 4, 0, 4), BracketMode::Symplectic);
        let c = s.context;
        let pq = s.monomial(vec![1], vec![1], 0, c.one()).unwrap();
        let f = pq.add(&pq.pow(2).unwrap()).unwrap();
        let class = hyperbolic_normal_space_class(&f).unwrap();
        assert_eq!(class.nu, vec![c.one()]);
        assert!(class.certificate.g.is_zero());
        assert!(class.verify(&pq, &f).unwrap());

        let f2 = f.add(&s.monomial(vec![3], vec![1], 0, c.from_int(4)).unwrap()).unwrap().add(&s.p(0)).unwrap();
        let class2 = hyperbolic_normal_space_class(&f2).unwrap();
        assert_eq!(class2.nu, vec![c.one()]);
        assert!(class2.verify(&pq, &f2).unwrap());
    }
}
