use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{commutator, matrix_exp, LieError, Matrix, SubspaceBasis};

/// A linear action of a matrix group, written through its exponential.
pub trait GroupAction {
    /// `g·x`.
    fn act(&self, g: &Matrix, x: &Matrix) -> Matrix;
    /// `e^ξ·x`.
    fn act_exp(&self, xi: &Matrix, x: &Matrix) -> Matrix {
        self.act(&matrix_exp(xi), x)
    }
    /// `ξ(x) = d/ds e^{sξ}·x` at `s = 0`.
    fn infinitesimal(&self, xi: &Matrix, x: &Matrix) -> Matrix;
    /// Size of the square matrices `ξ` acting on `x`.
    fn algebra_size(&self, x: &Matrix) -> usize {
        x.nrows()
    }
}

/// `GL(n)` acting by left multiplication on `n × k` matrices (vectors when `k = 1`).
#[derive(Clone, Copy, Debug, Default)]
pub struct LinearAction;

impl GroupAction for LinearAction {
    fn act(&self, g: &Matrix, x: &Matrix) -> Matrix {
        g * x
    }

    fn infinitesimal(&self, xi: &Matrix, x: &Matrix) -> Matrix {
        xi * x
    }
}

/// `GL(n)` acting on `M(n)` by conjugation.
#[derive(Clone, Copy, Debug, Default)]
pub struct AdjointAction;

impl GroupAction for AdjointAction {
    fn act(&self, g: &Matrix, x: &Matrix) -> Matrix {
        let inv = g.clone().try_inverse().expect("group element is invertible");
        g * x * inv
    }

    fn act_exp(&self, xi: &Matrix, x: &Matrix) -> Matrix {
        matrix_exp(xi) * x * matrix_exp(&(-xi))
    }

    fn infinitesimal(&self, xi: &Matrix, x: &Matrix) -> Matrix {
        commutator(xi, x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationConfig {
    pub max_iter: usize,
    pub tol: f64,
    /// Largest admissible `‖b‖`; a default depending on `a` when absent.
    pub basin_radius: Option<f64>,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig { max_iter: 30, tol: 1e-13, basin_radius: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub b_norm: f64,
    pub xi_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_norm: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// `‖b‖ ≤ tol`.
    Converged,
    /// The error stopped decreasing at rounding level.
    Stagnated,
}

/// Frobenius norms along an iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationTrace {
    /// `‖b_0‖, ‖b_1‖, …`.
    pub errors: Vec<f64>,
    pub steps: Vec<StepRecord>,
    pub fitted_order: Option<f64>,
    /// `‖b_1‖/‖b_0‖²`, the measured constant of the quadratic estimate.
    pub empirical_c: Option<f64>,
    pub termination: Termination,
}

impl IterationTrace {
    fn finish(errors: Vec<f64>, steps: Vec<StepRecord>, termination: Termination) -> Self {
        let fitted_order = convergence_order(&errors).ok();
        let empirical_c = (errors.len() >= 2 && errors[0] > 0.0).then(|| errors[1] / (errors[0] * errors[0]));
        IterationTrace { errors, steps, fitted_order, empirical_c, termination }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomogeneousResult {
    #[serde(serialize_with = "super::serialize_matrices")]
    pub generators: Vec<Matrix>,
    /// `e^{−ξ_m} ⋯ e^{−ξ_0}`.
    #[serde(serialize_with = "super::serialize_matrix")]
    pub group_element: Matrix,
    /// `g·(a+b) − a`.
    #[serde(serialize_with = "super::serialize_matrix")]
    pub residual: Matrix,
    pub trace: IterationTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParametricResult {
    #[serde(serialize_with = "super::serialize_matrices")]
    pub generators: Vec<Matrix>,
    #[serde(serialize_with = "super::serialize_matrix")]
    pub alpha_total: Matrix,
    #[serde(serialize_with = "super::serialize_matrix")]
    pub group_element: Matrix,
    /// `g(a+b)g⁻¹ − (a + α_total)`.
    #[serde(serialize_with = "super::serialize_matrix")]
    pub residual: Matrix,
    pub trace: IterationTrace,
}

fn unit(n: usize, k: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| if i + j * n == k { 1.0 } else { 0.0 })
}

fn vec_of(m: &Matrix) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_column_slice(m.as_slice())
}

/// Minimal-norm least-squares `j` with `j(v)(a) ≈ v`, from the pseudo-inverse of `ξ ↦ ξ(a)`.
pub fn least_squares_right_inverse<A: GroupAction>(action: &A, a: &Matrix) -> impl Fn(&Matrix) -> Matrix {
    let n = action.algebra_size(a);
    let cols: Vec<_> = (0..n * n).map(|k| vec_of(&action.infinitesimal(&unit(n, k), a))).collect();
    let op = Matrix::from_columns(&cols);
    let svd = op.svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let pinv = svd.pseudo_inverse(1e-12 * smax.max(f64::MIN_POSITIVE)).expect("U and V computed");
    let shape = (a.nrows(), a.ncols());
    move |v: &Matrix| {
        debug_assert_eq!((v.nrows(), v.ncols()), shape);
        let x = &pinv * vec_of(v);
        Matrix::from_column_slice(n, n, x.as_slice())
    }
}

/// Least-squares slope of `log e_{k+1}` against `log e_k` over the leading errors above `100ε`.
pub fn convergence_order(errors: &[f64]) -> Result<f64, LieError> {
    let usable: Vec<f64> = errors.iter().copied().take_while(|&e| e > 100.0 * f64::EPSILON).collect();
    if usable.len() < 3 {
        return Err(LieError::InsufficientSteps(usable.len()));
    }
    let pts: Vec<(f64, f64)> = usable.windows(2).map(|w| (w[0].ln(), w[1].ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(LieError::InsufficientSteps(usable.len()));
    }
    Ok(sxy / sxx)
}

/// Decides whether the loop goes on after an error moved from `prev` to `next`.
fn progress(prev: f64, next: f64, scale: f64, cfg: &IterationConfig, steps: usize) -> Result<Option<Termination>, LieError> {
    if next <= cfg.tol {
        return Ok(Some(Termination::Converged));
    }
    if next >= prev {
        if prev <= 1e3 * f64::EPSILON * scale.max(1.0) {
            return Ok(Some(Termination::Stagnated));
        }
        return Err(LieError::NoConvergence { steps, last: next });
    }
    if steps >= cfg.max_iter {
        return Err(LieError::NoConvergence { steps, last: next });
    }
    Ok(None)
}

/// `ξ_n = j(b_n)`, `b_{n+1} = e^{−ξ_n}(a + b_n) − a`.
pub fn lie_iterate_homogeneous<A: GroupAction>(
    action: &A,
    a: &Matrix,
    b: &Matrix,
    j: &dyn Fn(&Matrix) -> Matrix,
    cfg: &IterationConfig,
) -> Result<HomogeneousResult, LieError> {
    if a.shape() != b.shape() {
        return Err(LieError::Dimension("a and b differ in shape".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1ee);
    for _ in 0..4 {
        let v = Matrix::from_fn(a.nrows(), a.ncols(), |_, _| rng.gen_range(-1.0..1.0));
        let defect = (action.infinitesimal(&j(&v), a) - &v).norm() / v.norm();
        if defect > 1e-10 {
            return Err(LieError::RightInverseInvalid(defect));
        }
    }
    let radius = cfg.basin_radius.unwrap_or(0.5 * a.norm());
    if b.norm() > radius {
        return Err(LieError::BasinExceeded { norm: b.norm(), radius });
    }
    let k = action.algebra_size(a);
    let mut g = Matrix::identity(k, k);
    let mut generators = Vec::new();
    let mut steps = Vec::new();
    let mut errors = vec![b.norm()];
    let mut bn = b.clone();
    let mut termination = Termination::Converged;
    if b.norm() > cfg.tol {
        loop {
            let xi = j(&bn);
            let next = action.act_exp(&(-&xi), &(a + &bn)) - a;
            g = matrix_exp(&(-&xi)) * g;
            steps.push(StepRecord { b_norm: next.norm(), xi_norm: xi.norm(), alpha_norm: None });
            let prev = bn.norm();
            errors.push(next.norm());
            generators.push(xi);
            bn = next;
            if let Some(t) = progress(prev, bn.norm(), a.norm(), cfg, generators.len())? {
                termination = t;
                break;
            }
        }
    }
    let residual = action.act(&g, &(a + b)) - a;
    Ok(HomogeneousResult { generators, group_element: g, residual, trace: IterationTrace::finish(errors, steps, termination) })
}

/// `0.1·(smallest eigenvalue gap)` when the eigenvalues of `a` are distinct, `0.05` otherwise.
pub fn default_parametric_basin(a: &Matrix) -> f64 {
    let ev = a.complex_eigenvalues();
    let mut gap = f64::INFINITY;
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            gap = gap.min((ev[i] - ev[j]).norm());
        }
    }
    if gap.is_finite() && gap > 1e-6 {
        0.1 * gap
    } else {
        0.05
    }
}

/// Stacked map `(c, ξ) ↦ Σ c_k F_k + [ξ, a]` as an `n² × (m + n²)` matrix.
fn stacked_operator(a: &Matrix, transversal: &SubspaceBasis) -> Matrix {
    let n = a.nrows();
    let mut cols: Vec<_> = transversal.elements.iter().map(vec_of).collect();
    cols.extend((0..n * n).map(|k| vec_of(&commutator(&unit(n, k), a))));
    Matrix::from_columns(&cols)
}

/// `(α_n, ξ_n) = j_{a_n}(b_n)`, `a_{n+1} = a_n + α_n`, `b_{n+1} = e^{−ξ_n}(a_n + b_n)e^{ξ_n} − a_{n+1}`,
/// with `α_n ∈ span(transversal)` and `j` the minimal-norm least-squares solution at each `a_n`.
pub fn lie_iterate_parametric(
    a: &Matrix,
    b: &Matrix,
    transversal: &SubspaceBasis,
    cfg: &IterationConfig,
) -> Result<ParametricResult, LieError> {
    let n = a.nrows();
    if !a.is_square() || a.shape() != b.shape() || transversal.elements.iter().any(|f| f.shape() != a.shape()) {
        return Err(LieError::Dimension("a, b and the transversal must be n × n".into()));
    }
    let radius = cfg.basin_radius.unwrap_or_else(|| default_parametric_basin(a));
    if b.norm() > radius {
        return Err(LieError::BasinExceeded { norm: b.norm(), radius });
    }
    let m = transversal.dim();
    let mut an = a.clone();
    let mut bn = b.clone();
    let mut g = Matrix::identity(n, n);
    let mut generators = Vec::new();
    let mut steps = Vec::new();
    let mut errors = vec![b.norm()];
    let mut termination = Termination::Converged;
    if b.norm() > cfg.tol {
        loop {
            let op = stacked_operator(&an, transversal);
            let svd = op.svd(true, true);
            let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
            let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10 * smax).count();
            if rank < n * n {
                return Err(LieError::RankDeficient { rank, needed: n * n });
            }
            let x = svd.pseudo_inverse(1e-10 * smax).expect("U and V computed") * vec_of(&bn);
            let alpha = transversal.elements.iter().enumerate().fold(Matrix::zeros(n, n), |acc, (k, f)| acc + f * x[k]);
            let xi = Matrix::from_column_slice(n, n, &x.as_slice()[m..]);
            let sum = &an + &bn;
            an += &alpha;
            let next = AdjointAction.act_exp(&(-&xi), &sum) - &an;
            g = matrix_exp(&(-&xi)) * g;
            steps.push(StepRecord { b_norm: next.norm(), xi_norm: xi.norm(), alpha_norm: Some(alpha.norm()) });
            let prev = bn.norm();
            errors.push(next.norm());
            generators.push(xi);
            bn = next;
            if let Some(t) = progress(prev, bn.norm(), a.norm(), cfg, generators.len())? {
                termination = t;
                break;
            }
        }
    }
    let alpha_total = &an - a;
    let residual = AdjointAction.act(&g, &(a + b)) - &an;
    Ok(ParametricResult { generators, alpha_total, group_element: g, residual, trace: IterationTrace::finish(errors, steps, termination) })
}
