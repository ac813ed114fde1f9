use crate::scalar::Scalar;
use crate::series::{BracketMode, PoissonSeries};

use super::NormalFormError;

/// `H = Σ ω_i p_i + Σ α_ij p_i p_j + (p)³`, an element of `K[[p]]` without constant term.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrableHamiltonian {
    series: PoissonSeries,
    omega: Vec<Scalar>,
    /// Symmetric: the quadratic part equals `pᵀ α p`.
    alpha: Vec<Vec<Scalar>>,
}

impl IntegrableHamiltonian {
    pub fn new(series: PoissonSeries) -> Result<Self, NormalFormError> {
        if series.mode() != BracketMode::Torus {
            return Err(NormalFormError::Unsupported("integrable Hamiltonians live in torus mode".into()));
        }
        let n = series.n();
        let ctx = series.context();
        let mut omega = vec![ctx.zero(); n];
        let mut alpha = vec![vec![ctx.zero(); n]; n];
        for (key, c) in series.terms() {
            if !key.is_q_free() {
                return Err(NormalFormError::NotIntegrable(format!("term {key} depends on q")));
            }
            if key.t != 0 {
                return Err(NormalFormError::NotIntegrable(format!("term {key} depends on t")));
            }
            match key.p_degree() {
                0 => return Err(NormalFormError::NotIntegrable("nonzero constant term".into())),
                1 => {
                    let j = key.p.iter().position(|&e| e == 1).expect("degree one");
                    omega[j] = c.clone();
                }
                2 => {
                    let idx: Vec<usize> = key.p.iter().enumerate().flat_map(|(j, &e)| std::iter::repeat(j).take(e as usize)).collect();
                    let (i, j) = (idx[0], idx[1]);
                    if i == j {
                        alpha[i][i] = c.clone();
                    } else {
                        let half = c.mul_rational(&crate::scalar::Rational::new(1.into(), 2.into()));
                        alpha[i][j] = half.clone();
                        alpha[j][i] = half;
                    }
                }
                _ => {}
            }
        }
        Ok(IntegrableHamiltonian { series, omega, alpha })
    }

    pub fn series(&self) -> &PoissonSeries {
        &self.series
    }

    /// Frequency vector `ω = ∂H/∂p (0)`.
    pub fn omega(&self) -> &[Scalar] {
        &self.omega
    }

    pub fn alpha(&self) -> &[Vec<Scalar>] {
        &self.alpha
    }

    pub fn n(&self) -> usize {
        self.series.n()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarContext;
    use crate::series::{SeriesSpace, TruncationSpec};

    #[test]
    fn extracts_frequencies_and_symmetric_alpha() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(2, 3, 1, 1), BracketMode::Torus);
        let h = s.p(0).scale(&s.context.from_int(3)).unwrap()
            .add(&s.monomial(vec![0, 0], vec![1, 1], 0, s.context.from_int(4)).unwrap()).unwrap()
            .add(&s.monomial(vec![0, 0], vec![0, 2], 0, s.context.from_ratio(1, 2)).unwrap()).unwrap()
            .add(&s.monomial(vec![0, 0], vec![3, 0], 0, s.context.one()).unwrap()).unwrap();
        let h = IntegrableHamiltonian::new(h).unwrap();
        assert_eq!(h.omega(), &[s.context.from_int(3), s.context.zero()]);
        assert_eq!(h.alpha()[0][1], s.context.from_int(2));
        assert_eq!(h.alpha()[1][0], s.context.from_int(2));
        assert_eq!(h.alpha()[1][1], s.context.from_ratio(1, 2));
    }

    #[test]
    fn rejects_non_integrable() {
        let s = SeriesSpace::new(ScalarContext::Rational, TruncationSpec::new(1, 2, 1, 1), BracketMode::Torus);
        assert!(IntegrableHamiltonian::new(s.q_power(&[1]).unwrap().add(&s.p(0)).unwrap()).is_err());
        assert!(IntegrableHamiltonian::new(s.one().add(&s.p(0)).unwrap()).is_err());
        assert!(IntegrableHamiltonian::new(s.t().add(&s.p(0)).unwrap()).is_err());
    }
}
