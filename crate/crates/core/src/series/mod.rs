//! Truncated Poisson series in `K[q,q⁻¹][[p,t]]`.
//!
//! A series is a sparse map from monomials `q^I p^J t^k` to scalars. Every series carries
//! the [`SeriesSpace`] it lives in (coefficient context, truncation window and bracket
//! mode); binary operations require equal spaces.

mod flow;
mod json;
mod ops;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Scalar, ScalarContext, ScalarError};

pub use flow::{compose_flows, compose_flows_tracked, flow_apply, flow_apply_tracked, Generator};
pub use json::SeriesJson;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("series live in different spaces ({0})")]
    ContextMismatch(String),
    #[error("monomial {0} lies outside the truncation window")]
    OutOfWindow(String),
    #[error("exponent vector has length {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("hamiltonian generator has a term of t-degree {0}; its flow would not terminate")]
    GeneratorOrderViolation(u32),
    #[error("translation generator must have order ≥ 1 and {expected} shift entries")]
    InvalidTranslation { expected: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("malformed series document: {0}")]
    Format(String),
}

/// Exponents of one monomial `q^I p^J t^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    /// Laurent exponents of `q`.
    pub q: Vec<i32>,
    /// Exponents of `p`.
    pub p: Vec<u32>,
    /// Exponent of `t`.
    pub t: u32,
}

impl TermKey {
    pub fn new(q: Vec<i32>, p: Vec<u32>, t: u32) -> Self {
        TermKey { q, p, t }
    }

    pub fn constant(n: usize) -> Self {
        TermKey { q: vec![0; n], p: vec![0; n], t: 0 }
    }

    pub fn p_degree(&self) -> u32 {
        self.p.iter().sum()
    }

    pub fn q_sup_norm(&self) -> u32 {
        self.q.iter().map(|e| e.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn is_q_free(&self) -> bool {
        self.q.iter().all(|&e| e == 0)
    }

    pub fn is_constant_in_p(&self) -> bool {
        self.p.iter().all(|&e| e == 0)
    }
}

impl fmt::Display for TermKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{:?} p^{:?} t^{}", self.q, self.p, self.t)
    }
}

/// The finite window inside which series identities are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub n: usize,
    /// Maximal total degree in `p`.
    pub dp: u32,
    /// Maximal degree in `t`.
    pub dt: u32,
    /// Maximal sup-norm of the Laurent exponent `I`.
    pub nq: u32,
}

impl TruncationSpec {
    pub fn new(n: usize, dp: u32, dt: u32, nq: u32) -> Self {
        TruncationSpec { n, dp, dt, nq }
    }

    pub fn admits(&self, key: &TermKey) -> bool {
        key.p_degree() <= self.dp && key.t <= self.dt && key.q_sup_norm() <= self.nq
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BracketMode {
    /// `{p_j, q_k} = q_k δ_jk` on the algebraic torus.
    Torus,
    /// `{p_j, q_k} = δ_jk`.
    Symplectic,
}

/// Coefficient context, truncation window and bracket mode shared by combinable series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeriesSpace {
    pub context: ScalarContext,
    pub trunc: TruncationSpec,
    pub mode: BracketMode,
}

impl SeriesSpace {
    pub fn new(context: ScalarContext, trunc: TruncationSpec, mode: BracketMode) -> Self {
        SeriesSpace { context, trunc, mode }
    }

    pub fn n(&self) -> usize {
        self.trunc.n
    }

    pub fn zero(&self) -> PoissonSeries {
        PoissonSeries { space: *self, terms: BTreeMap::new() }
    }

    pub fn constant(&self, c: Scalar) -> Result<PoissonSeries, SeriesError> {
        self.monomial(vec![0; self.n()], vec![0; self.n()], 0, c)
    }

    pub fn one(&self) -> PoissonSeries {
        self.constant(self.context.one()).expect("constant fits every window")
    }

    /// `c · q^I p^J t^k`; errors when the monomial is outside the window.
    pub fn monomial(&self, q: Vec<i32>, p: Vec<u32>, t: u32, c: Scalar) -> Result<PoissonSeries, SeriesError> {
        let mut s = self.zero();
        s.insert(TermKey::new(q, p, t), c)?;
        Ok(s)
    }

    /// The coordinate `p_j`.
    pub fn p(&self, j: usize) -> PoissonSeries {
        let mut e = vec![0; self.n()];
        e[j] = 1;
        self.monomial(vec![0; self.n()], e, 0, self.context.one()).expect("p_j fits when dp ≥ 1")
    }

    /// The Laurent monomial `q^I`.
    pub fn q_power(&self, exps: &[i32]) -> Result<PoissonSeries, SeriesError> {
        self.monomial(exps.to_vec(), vec![0; self.n()], 0, self.context.one())
    }

    /// The deformation parameter `t`.
    pub fn t(&self) -> PoissonSeries {
        self.monomial(vec![0; self.n()], vec![0; self.n()], 1, self.context.one())
            .expect("t fits when dt ≥ 1")
    }

    fn describe(&self) -> String {
        format!("{}, {:?}, {:?}", self.context, self.trunc, self.mode)
    }
}

/// A truncated element of `K[q,q⁻¹][[p,t]]` with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonSeries {
    space: SeriesSpace,
    terms: BTreeMap<TermKey, Scalar>,
}

impl PoissonSeries {
    pub fn space(&self) -> &SeriesSpace {
        &self.space
    }

    pub fn context(&self) -> ScalarContext {
        self.space.context
    }

    pub fn trunc(&self) -> &TruncationSpec {
        &self.space.trunc
    }

    pub fn mode(&self) -> BracketMode {
        self.space.mode
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &TermKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(|| self.space.context.zero())
    }

    /// Coefficient of `q^I p^J t^k`.
    pub fn coeff_of(&self, q: &[i32], p: &[u32], t: u32) -> Scalar {
        self.coeff(&TermKey::new(q.to_vec(), p.to_vec(), t))
    }

    pub(crate) fn check_key(&self, key: &TermKey) -> Result<(), SeriesError> {
        let n = self.n();
        if key.q.len() != n {
            return Err(SeriesError::Dimension { expected: n, got: key.q.len() });
        }
        if key.p.len() != n {
            return Err(SeriesError::Dimension { expected: n, got: key.p.len() });
        }
        Ok(())
    }

    /// Adds `c` to the coefficient of `key`; errors if the key lies outside the window.
    pub fn insert(&mut self, key: TermKey, c: Scalar) -> Result<(), SeriesError> {
        self.check_key(&key)?;
        if !self.space.trunc.admits(&key) {
            return Err(SeriesError::OutOfWindow(key.to_string()));
        }
        let c = self.space.context.lift(&c)?;
        self.accumulate(key, c);
        Ok(())
    }

    /// Adds `c` to the coefficient of an admitted key, removing it on cancellation.
    pub(crate) fn accumulate(&mut self, key: TermKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub(crate) fn from_parts(space: SeriesSpace, terms: BTreeMap<TermKey, Scalar>) -> Self {
        debug_assert!(terms.iter().all(|(k, c)| space.trunc.admits(k) && !c.is_zero()));
        PoissonSeries { space, terms }
    }

    pub(crate) fn same_space(&self, other: &PoissonSeries) -> Result<(), SeriesError> {
        if self.space != other.space {
            Err(SeriesError::ContextMismatch(format!("{} vs {}", self.space.describe(), other.space.describe())))
        } else {
            Ok(())
        }
    }

    /// Keeps the terms whose key satisfies `pred`.
    pub fn filter(&self, pred: impl Fn(&TermKey) -> bool) -> PoissonSeries {
        let terms = self.terms.iter().filter(|(k, _)| pred(k)).map(|(k, c)| (k.clone(), c.clone())).collect();
        PoissonSeries { space: self.space, terms }
    }

    /// Torus average: the terms with `I = 0`.
    pub fn average(&self) -> PoissonSeries {
        self.filter(TermKey::is_q_free)
    }

    /// The part of exact `t`-degree `k`, still as a series (keeps the `t^k` factor).
    pub fn t_part(&self, k: u32) -> PoissonSeries {
        self.filter(|key| key.t == k)
    }

    /// The part of exact total `p`-degree `m`.
    pub fn p_degree_part(&self, m: u32) -> PoissonSeries {
        self.filter(|key| key.p_degree() == m)
    }

    pub fn min_t_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.t).min()
    }

    pub fn max_p_degree(&self) -> Option<u32> {
        self.terms.keys().map(TermKey::p_degree).max()
    }

    pub fn is_q_free(&self) -> bool {
        self.terms.keys().all(TermKey::is_q_free)
    }

    /// Distinct nonzero Laurent exponents in the support.
    pub fn laurent_support(&self) -> Vec<Vec<i32>> {
        let mut out: Vec<Vec<i32>> =
            self.terms.keys().filter(|k| !k.is_q_free()).map(|k| k.q.clone()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Multiplies every key by `t^shift`, dropping terms pushed past `dt`.
    pub fn shift_t(&self, shift: u32) -> PoissonSeries {
        let dt = self.space.trunc.dt;
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.t + shift <= dt)
            .map(|(k, c)| (TermKey { t: k.t + shift, ..k.clone() }, c.clone()))
            .collect();
        PoissonSeries { space: self.space, terms }
    }

    /// Moves the series into another window of the same dimension, dropping what does not fit.
    pub fn retruncate(&self, trunc: TruncationSpec) -> Result<PoissonSeries, SeriesError> {
        if trunc.n != self.n() {
            return Err(SeriesError::Dimension { expected: self.n(), got: trunc.n });
        }
        let space = SeriesSpace { trunc, ..self.space };
        let terms = self.terms.iter().filter(|(k, _)| trunc.admits(k)).map(|(k, c)| (k.clone(), c.clone())).collect();
        Ok(PoissonSeries { space, terms })
    }
}

impl fmt::Display for PoissonSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (j, e) in k.q.iter().enumerate() {
                if *e != 0 {
                    write!(f, "·q{}^{}", j + 1, e)?;
                }
            }
            for (j, e) in k.p.iter().enumerate() {
                if *e != 0 {
                    write!(f, "·p{}^{}", j + 1, e)?;
                }
            }
            if k.t != 0 {
                write!(f, "·t^{}", k.t)?;
            }
        }
        Ok(())
    }
}
