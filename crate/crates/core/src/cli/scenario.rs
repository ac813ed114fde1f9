//! Scenario schemas and their dispatch to the computational modules.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::diophantine::{
    decay_fit, hadamard_apply, kolmogorov_constant, liouville_witness, measure_estimate, small_denominator_series,
    DiophantineError, FourierTable, FrequencyVector, MeasureParams,
};
use crate::lie::{
    default_parametric_basin, least_squares_right_inverse, lie_iterate_homogeneous, lie_iterate_parametric,
    matrix_from_rows, transversal_from_commutant, AdjointAction, IterationConfig, LieError, LinearAction,
};
use crate::normalform::{formal_normal_form, kolmogorov_normal_form, resonances, IntegrableHamiltonian, NormalFormError};
use crate::scalar::{Rational, Scalar, ScalarContext, ScalarError};
use crate::series::{BracketMode, PoissonSeries, SeriesError, SeriesSpace, TermKey, TruncationSpec};

use super::selftest::{selftest, SelftestOptions};

pub type Term = (Vec<i32>, Vec<u32>, u32, String);

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub dp: u32,
    pub dt: u32,
    pub nq: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormScenario {
    pub n: usize,
    pub context: ScalarContext,
    pub trunc: Window,
    pub hamiltonian: Vec<Term>,
    pub perturbation: Vec<Term>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceScenario {
    pub context: ScalarContext,
    pub omega: Vec<String>,
    pub cutoff: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiophantineScenario {
    pub context: ScalarContext,
    pub omega: Vec<String>,
    pub nu: String,
    pub cutoffs: Vec<u32>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiouvilleScenario {
    pub k: Vec<u32>,
    pub nu: String,
    pub m: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HadamardScenario {
    pub context: ScalarContext,
    pub omega: Vec<String>,
    pub cutoff: u32,
    /// Decay rate `s` of the test table `e^{−s‖I‖}`.
    pub decay: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureScenario {
    pub n: usize,
    pub radius: f64,
    pub c: Vec<f64>,
    pub nu: String,
    pub cutoff: u32,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    #[default]
    Linear,
    Adjoint,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieScenario {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    #[serde(default)]
    pub action: ActionKind,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub basin_radius: Option<f64>,
}

fn default_max_iter() -> usize {
    IterationConfig::default().max_iter
}

fn default_tol() -> f64 {
    IterationConfig::default().tol
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelftestScenario {
    #[serde(default)]
    pub seed: u64,
}

/// A scenario file: a `"kind"` discriminant plus the kind's parameters.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    FormalNf(NormalFormScenario),
    KolmogorovNf(NormalFormScenario),
    Resonances(ResonanceScenario),
    Diophantine(DiophantineScenario),
    Liouville(LiouvilleScenario),
    Hadamard(HadamardScenario),
    Measure(MeasureScenario),
    LieHomogeneous(LieScenario),
    LieParametric(LieScenario),
    Selftest(SelftestScenario),
}

impl Scenario {
    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::FormalNf(_) => "formal-nf",
            Scenario::KolmogorovNf(_) => "kolmogorov-nf",
            Scenario::Resonances(_) => "resonances",
            Scenario::Diophantine(_) => "diophantine",
            Scenario::Liouville(_) => "liouville",
            Scenario::Hadamard(_) => "hadamard",
            Scenario::Measure(_) => "measure",
            Scenario::LieHomogeneous(_) => "lie-homogeneous",
            Scenario::LieParametric(_) => "lie-parametric",
            Scenario::Selftest(_) => "selftest",
        }
    }

    /// Checks what serde cannot: literals, radicands, dimensions.
    pub fn validate(&self) -> Result<(), String> {
        let ctx = |c: &ScalarContext| match c {
            ScalarContext::Quadratic(d) => ScalarContext::quadratic(*d).map(|_| ()).map_err(|e| e.to_string()),
            _ => Ok(()),
        };
        let lits = |c: &ScalarContext, v: &[String]| -> Result<(), String> {
            for s in v {
                c.parse(s).map_err(|e| e.to_string())?;
            }
            if v.is_empty() {
                return Err("omega must be nonempty".into());
            }
            Ok(())
        };
        let rational = |s: &str| ScalarContext::Rational.parse(s).map(|_| ()).map_err(|e| format!("nu: {e}"));
        match self {
            Scenario::FormalNf(s) | Scenario::KolmogorovNf(s) => {
                ctx(&s.context)?;
                if s.n == 0 {
                    return Err("n must be positive".into());
                }
                for (q, p, _, lit) in s.hamiltonian.iter().chain(&s.perturbation) {
                    if q.len() != s.n || p.len() != s.n {
                        return Err(format!("term exponents must have length {}", s.n));
                    }
                    s.context.parse(lit).map_err(|e| e.to_string())?;
                }
                Ok(())
            }
            Scenario::Resonances(s) => {
                ctx(&s.context)?;
                lits(&s.context, &s.omega)?;
                if s.cutoff == 0 {
                    return Err("cutoff must be at least 1".into());
                }
                Ok(())
            }
            Scenario::Diophantine(s) => {
                ctx(&s.context)?;
                lits(&s.context, &s.omega)?;
                rational(&s.nu)?;
                if s.cutoffs.is_empty() || s.cutoffs.contains(&0) {
                    return Err("cutoffs must be a nonempty list of positive integers".into());
                }
                Ok(())
            }
            Scenario::Liouville(s) => rational(&s.nu),
            Scenario::Hadamard(s) => {
                ctx(&s.context)?;
                lits(&s.context, &s.omega)
            }
            Scenario::Measure(s) => {
                rational(&s.nu)?;
                if s.c.is_empty() {
                    return Err("c must list at least one constant".into());
                }
                Ok(())
            }
            Scenario::LieHomogeneous(s) | Scenario::LieParametric(s) => {
                let a = matrix_from_rows(&s.a).map_err(|e| e.to_string())?;
                let b = matrix_from_rows(&s.b).map_err(|e| e.to_string())?;
                if a.shape() != b.shape() || a.is_empty() {
                    return Err("a and b must be nonempty and of equal shape".into());
                }
                if (matches!(self, Scenario::LieParametric(_)) || s.action == ActionKind::Adjoint) && !a.is_square() {
                    return Err("the adjoint action needs square matrices".into());
                }
                Ok(())
            }
            Scenario::Selftest(_) => Ok(()),
        }
    }
}

/// A computational failure, embedded into the report.
#[derive(Clone, Debug, PartialEq)]
pub struct ComputeError {
    pub kind: String,
    pub message: String,
    pub details: Value,
}

impl ComputeError {
    pub fn to_json(&self) -> Value {
        json!({"kind": self.kind, "message": self.message, "details": self.details})
    }
}

impl From<NormalFormError> for ComputeError {
    fn from(e: NormalFormError) -> Self {
        let (kind, details) = match &e {
            NormalFormError::ResonantDenominator { lattice, order } => ("ResonantDenominator", json!({"lattice": lattice, "order": order})),
            NormalFormError::DegenerateAlpha => ("DegenerateAlpha", Value::Null),
            NormalFormError::TruncationExceeded(_) => ("TruncationExceeded", Value::Null),
            NormalFormError::NotIntegrable(_) => ("NotIntegrable", Value::Null),
            NormalFormError::Unsupported(_) => ("Unsupported", Value::Null),
            NormalFormError::Series(_) => ("SeriesError", Value::Null),
            NormalFormError::Scalar(_) => ("ScalarError", Value::Null),
        };
        ComputeError { kind: kind.into(), message: e.to_string(), details }
    }
}

impl From<DiophantineError> for ComputeError {
    fn from(e: DiophantineError) -> Self {
        let (kind, details) = match &e {
            DiophantineError::ResonantDenominator(l) => ("ResonantDenominator", json!({"lattice": l})),
            DiophantineError::InsufficientSupport(k) => ("InsufficientSupport", json!({"points": k})),
            DiophantineError::InvalidInput(_) => ("InvalidInput", Value::Null),
            DiophantineError::Scalar(_) => ("ScalarError", Value::Null),
        };
        ComputeError { kind: kind.into(), message: e.to_string(), details }
    }
}

impl From<LieError> for ComputeError {
    fn from(e: LieError) -> Self {
        let kind = match &e {
            LieError::OrthogonalityCheckFailed(_) => "OrthogonalityCheckFailed",
            LieError::NoConvergence { .. } => "NoConvergence",
            LieError::BasinExceeded { .. } => "BasinExceeded",
            LieError::RankDeficient { .. } => "RankDeficient",
            LieError::InsufficientSteps(_) => "InsufficientSteps",
            LieError::RightInverseInvalid(_) => "RightInverseInvalid",
            LieError::Dimension(_) => "Dimension",
        };
        ComputeError { kind: kind.into(), message: e.to_string(), details: Value::Null }
    }
}

impl From<SeriesError> for ComputeError {
    fn from(e: SeriesError) -> Self {
        NormalFormError::from(e).into()
    }
}

impl From<ScalarError> for ComputeError {
    fn from(e: ScalarError) -> Self {
        NormalFormError::from(e).into()
    }
}

fn build_series(space: &SeriesSpace, terms: &[Term]) -> Result<PoissonSeries, ComputeError> {
    let mut s = space.zero();
    for (q, p, t, lit) in terms {
        let c = space.context.parse(lit)?;
        s.insert(TermKey::new(q.clone(), p.clone(), *t), c)?;
    }
    Ok(s)
}

fn parse_rational(s: &str) -> Result<Rational, ComputeError> {
    Ok(ScalarContext::Rational.parse(s)?.as_rational().expect("rational context"))
}

fn omega_of(ctx: ScalarContext, lits: &[String]) -> Result<FrequencyVector, ComputeError> {
    let entries = lits.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<Scalar>, _>>()?;
    Ok(FrequencyVector::new(entries)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// The kind-specific result and diagnostics.
pub fn execute(scenario: &Scenario) -> Result<(Value, Value), ComputeError> {
    match scenario {
        Scenario::FormalNf(s) | Scenario::KolmogorovNf(s) => {
            let space = SeriesSpace::new(s.context, TruncationSpec::new(s.n, s.trunc.dp, s.trunc.dt, s.trunc.nq), BracketMode::Torus);
            let h = IntegrableHamiltonian::new(build_series(&space, &s.hamiltonian)?)?;
            let q = build_series(&space, &s.perturbation)?;
            let res = if matches!(scenario, Scenario::FormalNf(_)) { formal_normal_form(&h, &q)? } else { kolmogorov_normal_form(&h, &q)? };
            let diag = json!({
                "dropped_terms": res.dropped_terms,
                "smallest_denominators": res.diagnostics.iter().map(|d| json!({"order": d.order, "value": d.smallest_denominator})).collect::<Vec<_>>(),
            });
            Ok((to_value(&res), diag))
        }
        Scenario::Resonances(s) => {
            let omega = omega_of(s.context, &s.omega)?;
            Ok((json!({"resonances": resonances(omega.entries(), s.cutoff)}), json!({})))
        }
        Scenario::Diophantine(s) => {
            let omega = omega_of(s.context, &s.omega)?;
            let nu = parse_rational(&s.nu)?;
            let ests = s.cutoffs.iter().map(|&n| kolmogorov_constant(&omega, &nu, n)).collect::<Result<Vec<_>, _>>()?;
            let monotone = ests.windows(2).map(|w| w[1].cmp_exact(&w[0]).map(|o| o != std::cmp::Ordering::Greater)).collect::<Result<Vec<_>, _>>()?;
            Ok((json!({"estimates": to_value(&ests)}), json!({"monotone_nonincreasing": monotone.iter().all(|&b| b)})))
        }
        Scenario::Liouville(s) => {
            let nu = parse_rational(&s.nu)?;
            let ws = s.k.iter().map(|&k| liouville_witness(k, &nu, s.m)).collect::<Result<Vec<_>, _>>()?;
            let decreasing = ws.windows(2).all(|w| w[1].strictly_below(&w[0]));
            Ok((json!({"witnesses": to_value(&ws)}), json!({"products_strictly_decreasing": decreasing})))
        }
        Scenario::Hadamard(s) => {
            let omega = omega_of(s.context, &s.omega)?;
            let h = small_denominator_series(&omega, s.cutoff)?;
            let decay = s.decay;
            let f = FourierTable::from_fn(omega.n(), s.cutoff, format!("exp(-{decay}|I|)"), |v| {
                (-decay * v.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt()).exp()
            });
            let prod = hadamard_apply(&h, &f);
            let (largest_index, largest) = h.coefficients.iter().max_by(|a, b| a.1.value.total_cmp(&b.1.value)).expect("nonempty ball");
            Ok((
                json!({
                    "support": h.len(),
                    "largest_small_denominator_inverse": {"index": largest_index, "value": largest},
                    "fit_small_denominators": to_value(&decay_fit(&h)?),
                    "fit_input": to_value(&decay_fit(&f)?),
                    "fit_product": to_value(&decay_fit(&prod)?),
                }),
                json!({}),
            ))
        }
        Scenario::Measure(s) => {
            let mut out = Vec::new();
            for &c in &s.c {
                let p = MeasureParams { n: s.n, radius: s.radius, c, nu: s.nu.clone(), cutoff: s.cutoff, samples: s.samples, seed: s.seed };
                let est = measure_estimate(&p)?;
                out.push(json!({"c": c, "estimate": to_value(&est), "ratio": if c > 0.0 { Some(est.fraction_bad / c) } else { None }}));
            }
            Ok((json!({"estimates": out}), json!({"partitions": crate::diophantine::MEASURE_PARTITIONS})))
        }
        Scenario::LieHomogeneous(s) => {
            let a = matrix_from_rows(&s.a)?;
            let b = matrix_from_rows(&s.b)?;
            let cfg = IterationConfig { max_iter: s.max_iter, tol: s.tol, basin_radius: s.basin_radius };
            let res = match s.action {
                ActionKind::Linear => {
                    let j = least_squares_right_inverse(&LinearAction, &a);
                    lie_iterate_homogeneous(&LinearAction, &a, &b, &j, &cfg)?
                }
                ActionKind::Adjoint => {
                    let j = least_squares_right_inverse(&AdjointAction, &a);
                    lie_iterate_homogeneous(&AdjointAction, &a, &b, &j, &cfg)?
                }
            };
            Ok((to_value(&res), json!({"basin_radius": s.basin_radius.unwrap_or(0.5 * a.norm())})))
        }
        Scenario::LieParametric(s) => {
            let a = matrix_from_rows(&s.a)?;
            let b = matrix_from_rows(&s.b)?;
            let cfg = IterationConfig { max_iter: s.max_iter, tol: s.tol, basin_radius: s.basin_radius };
            let t = transversal_from_commutant(&a)?;
            let res = lie_iterate_parametric(&a, &b, &t, &cfg)?;
            let normal = &a + &res.alpha_total;
            Ok((
                json!({"normal_form": crate::lie::matrix_rows(&normal), "iteration": to_value(&res), "transversal": to_value(&t)}),
                json!({"basin_radius": s.basin_radius.unwrap_or_else(|| default_parametric_basin(&a))}),
            ))
        }
        Scenario::Selftest(s) => {
            let report = selftest(&SelftestOptions { seed: s.seed, mutate_bracket_sign: false });
            Ok((to_value(&report), json!({})))
        }
    }
}
