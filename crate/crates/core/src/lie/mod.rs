//! Finite-dimensional Lie iterations for the adjoint action and other linear group actions.

mod commutant;
mod expm;
mod iterate;

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

pub use commutant::{commutant_basis, orthogonality_residual, transversal_from_commutant, SubspaceBasis};
pub use expm::matrix_exp;
pub use iterate::{
    convergence_order, default_parametric_basin, least_squares_right_inverse, lie_iterate_homogeneous,
    lie_iterate_parametric, AdjointAction, GroupAction, HomogeneousResult, IterationConfig, IterationTrace,
    LinearAction, ParametricResult, StepRecord, Termination,
};

pub type Matrix = DMatrix<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("transversal is not orthogonal to the orbit: residual {0:e}")]
    OrthogonalityCheckFailed(f64),
    #[error("no convergence after {steps} steps (last error {last:e})")]
    NoConvergence { steps: usize, last: f64 },
    #[error("perturbation norm {norm:e} exceeds basin radius {radius:e}")]
    BasinExceeded { norm: f64, radius: f64 },
    #[error("stacked operator has rank {rank}, needs {needed}")]
    RankDeficient { rank: usize, needed: usize },
    #[error("need at least 3 errors above 100ε, got {0}")]
    InsufficientSteps(usize),
    #[error("right inverse check failed: relative defect {0:e}")]
    RightInverseInvalid(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Row-major nested arrays for JSON output.
pub fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Inverse of [`matrix_rows`].
pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<Matrix, LieError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(LieError::Dimension("ragged matrix rows".into()));
    }
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

#[derive(Serialize)]
struct RowMajor<'a>(#[serde(serialize_with = "serialize_matrix")] &'a Matrix);

pub(crate) fn serialize_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&matrix_rows(m), s)
}

pub(crate) fn serialize_matrices<S: serde::Serializer>(ms: &[Matrix], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ms.iter().map(RowMajor))
}

/// `[x, y] = xy − yx`.
pub fn commutator(x: &Matrix, y: &Matrix) -> Matrix {
    x * y - y * x
}
