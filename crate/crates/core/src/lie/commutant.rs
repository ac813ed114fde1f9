use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{commutator, LieError, Matrix};

/// Spanning set of a linear subspace of `M(n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubspaceBasis {
    #[serde(serialize_with = "super::serialize_matrices")]
    pub elements: Vec<Matrix>,
    /// Orthonormal for the trace inner product `⟨A,B⟩ = Tr(ABᵀ)`.
    pub orthonormalized: bool,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// `C(A) = {B : [B,A] = 0}` as the nullspace of `X ↦ XA − AX`, read off the SVD of its
/// `n² × n²` matrix with cutoff `σ < 10⁻¹⁰·σ_max`.
pub fn commutant_basis(a: &Matrix) -> SubspaceBasis {
    let n = a.nrows();
    let id = Matrix::identity(n, n);
    // column-major vec: vec(XA) = (Aᵀ ⊗ I) vec X, vec(AX) = (I ⊗ A) vec X
    let op = a.transpose().kronecker(&id) - id.kronecker(a);
    let svd = op.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let elements = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| sigma_max == 0.0 || s < 1e-10 * sigma_max)
        .map(|(k, _)| Matrix::from_iterator(n, n, v_t.row(k).iter().copied()))
        .collect();
    SubspaceBasis { elements, orthonormalized: true }
}

/// Largest `|⟨[A,X], T⟩| / (‖A‖‖X‖‖T‖)` over the basis `T` and `checks` random `X`.
pub fn orthogonality_residual(a: &Matrix, basis: &SubspaceBasis, checks: usize, seed: u64) -> f64 {
    let n = a.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale_a = a.norm().max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for _ in 0..checks {
        let x = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let c = commutator(a, &x);
        for t in &basis.elements {
            let inner = c.component_mul(t).sum();
            worst = worst.max(inner.abs() / (scale_a * x.norm() * t.norm().max(f64::MIN_POSITIVE)));
        }
    }
    worst
}

/// `C(A)ᵀ`, the orthogonal complement of the tangent space `{[X,A]}` to the orbit.
pub fn transversal_from_commutant(a: &Matrix) -> Result<SubspaceBasis, LieError> {
    let c = commutant_basis(a);
    let t = SubspaceBasis { elements: c.elements.iter().map(Matrix::transpose).collect(), orthonormalized: c.orthonormalized };
    let r = orthogonality_residual(a, &t, 8, 0x5eed);
    if r > 1e-10 {
        return Err(LieError::OrthogonalityCheckFailed(r));
    }
    Ok(t)
}
