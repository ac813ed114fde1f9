//! Small denominators: Kolmogorov's condition, Liouville-type witnesses, Hadamard products
//! of Fourier tables and a Monte-Carlo check of the measure estimate.

mod constant;
mod fourier;
mod liouville;
mod measure;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{Scalar, ScalarContext, ScalarError};

pub use constant::{kolmogorov_constant, DiophantineEstimate};
pub use fourier::{decay_fit, hadamard_apply, small_denominator_series, DecayFit, FourierTable};
pub use liouville::{liouville_witness, LiouvilleWitness};
pub use measure::{measure_estimate, MeasureEstimate, MeasureParams, PARTITIONS as MEASURE_PARTITIONS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiophantineError {
    #[error("resonant denominator: (ω,I) = 0 for I = {0:?}")]
    ResonantDenominator(Vec<i32>),
    #[error("decay fit needs at least 3 nonzero coefficients, got {0}")]
    InsufficientSupport(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `ω ∈ Kⁿ` in a single scalar context.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyVector {
    entries: Vec<Scalar>,
    #[serde(skip)]
    context: ScalarContext,
}

impl FrequencyVector {
    pub fn new(entries: Vec<Scalar>) -> Result<Self, DiophantineError> {
        let Some(first) = entries.first() else {
            return Err(DiophantineError::InvalidInput("empty frequency vector".into()));
        };
        let context = first.context();
        if entries.iter().any(|e| e.context() != context) {
            return Err(ScalarError::ContextMismatch.into());
        }
        Ok(FrequencyVector { entries, context })
    }

    pub fn parse(context: ScalarContext, literals: &[&str]) -> Result<Self, DiophantineError> {
        let entries = literals.iter().map(|s| context.parse(s)).collect::<Result<Vec<_>, _>>()?;
        FrequencyVector::new(entries)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn context(&self) -> ScalarContext {
        self.context
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn pairing(&self, lattice: &[i32]) -> Scalar {
        crate::normalform::pairing(&self.entries, lattice)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(Scalar::to_f64).collect()
    }
}

/// Rigorous absolute error bound for the float evaluation of `Σ ω_i I_i` when each `ω_i` carries
/// a relative error of at most `2ε`.
pub(crate) fn pairing_error_bound(omega: &[f64], lattice: &[i32]) -> f64 {
    let mass: f64 = omega.iter().zip(lattice).map(|(w, &i)| (w * i as f64).abs()).sum();
    8.0 * (omega.len() as f64 + 1.0) * f64::EPSILON * mass + f64::MIN_POSITIVE
}

/// `s^{e/2}` for `s = ‖I‖²`, using integer powers where `e` allows it.
pub(crate) fn norm_power(s: f64, e: f64) -> f64 {
    if e.fract() == 0.0 && e.abs() < 64.0 {
        let k = e as i32;
        if k % 2 == 0 {
            s.powi(k / 2)
        } else {
            s.sqrt() * s.powi((k - 1) / 2)
        }
    } else {
        s.powf(0.5 * e)
    }
}
