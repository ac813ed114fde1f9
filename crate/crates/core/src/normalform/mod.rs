//! Constructive normal forms for deformations `H + tQ` of integrable Hamiltonians.
//!
//! * [`resonances`] lists integer relations `(ω,I) = 0` in a lattice ball.
//! * [`homological_solve`] solves `{H,S} + R ∈ K[[p,t]]` triangularly in the `p`-degree.
//! * [`formal_normal_form`] removes every `q`-dependent term order by order in `t`.
//! * [`kolmogorov_normal_form`] reaches `H + c(t) + (terms in I²·(t))` using hamiltonian
//!   generators together with translations in `p`.
//! * [`normal_space_class`] computes the class of an element in `A/({H,A} + I² + K)`.

mod hamiltonian;
mod homological;
mod iteration;
mod linalg;
mod normal_space;
mod resonance;

use thiserror::Error;

use crate::scalar::ScalarError;
use crate::series::SeriesError;

pub use hamiltonian::IntegrableHamiltonian;
pub use homological::{homological_solve, HomologicalSolution};
pub use iteration::{formal_normal_form, kolmogorov_normal_form, NormalFormResult, OrderDiagnostics};
pub use linalg::{determinant, solve_linear};
pub use normal_space::{hyperbolic_normal_space_class, normal_space_class, ClassCertificate, NormalSpaceClass};
pub use resonance::{pairing, resonances};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalFormError {
    #[error("resonant denominator: (ω,I) = 0 for I = {lattice:?} at t-order {order}")]
    ResonantDenominator { lattice: Vec<i32>, order: u32 },
    #[error("the quadratic part α of H is not invertible")]
    DegenerateAlpha,
    #[error("truncation window too small: {0}")]
    TruncationExceeded(String),
    #[error("not an integrable Hamiltonian: {0}")]
    NotIntegrable(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
