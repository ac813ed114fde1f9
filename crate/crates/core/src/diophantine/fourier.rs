use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::Serialize;

use crate::scalar::CertifiedDecimal;

use super::{DiophantineError, FrequencyVector};

/// Finite table of Fourier magnitudes `|a_I|`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierTable {
    pub coefficients: BTreeMap<Vec<i32>, CertifiedDecimal>,
    pub source: String,
}

impl FourierTable {
    pub fn new(source: impl Into<String>) -> Self {
        FourierTable { coefficients: BTreeMap::new(), source: source.into() }
    }

    /// Exact magnitudes `f(I)` on `0 < ‖I‖_∞ ≤ N` in dimension `n`.
    pub fn from_fn(n: usize, cutoff: u32, source: impl Into<String>, f: impl Fn(&[i32]) -> f64) -> Self {
        let mut t = FourierTable::new(source);
        let r = cutoff as i32;
        let mut v = vec![-r; n];
        loop {
            if v.iter().any(|&x| x != 0) {
                t.coefficients.insert(v.clone(), CertifiedDecimal::new(f(&v), 0.0));
            }
            let Some(j) = (0..n).rev().find(|&j| v[j] < r) else { break };
            v[j] += 1;
            v[j + 1..].iter_mut().for_each(|x| *x = -r);
        }
        t
    }

    pub fn insert(&mut self, index: Vec<i32>, magnitude: f64) {
        self.coefficients.insert(index, CertifiedDecimal::new(magnitude.abs(), 0.0));
    }

    pub fn get(&self, index: &[i32]) -> Option<&CertifiedDecimal> {
        self.coefficients.get(index)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

impl Serialize for FourierTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("source", &self.source)?;
        let rows: Vec<(&Vec<i32>, f64, f64)> = self.coefficients.iter().map(|(k, c)| (k, c.value, c.error)).collect();
        map.serialize_entry("coefficients", &rows)?;
        map.end()
    }
}

/// `|(ω,I)|⁻¹` on the punctured sup-norm ball, computed by exact field inversion.
pub fn small_denominator_series(omega: &FrequencyVector, cutoff: u32) -> Result<FourierTable, DiophantineError> {
    let mut out = FourierTable::new("small-denominators");
    let mut err = None;
    let base = FourierTable::from_fn(omega.n(), cutoff, "", |_| 0.0);
    for index in base.coefficients.keys() {
        let pair = omega.pairing(index);
        if pair.exact_sign() == 0 {
            err.get_or_insert_with(|| crate::lattice::normalize(index));
            continue;
        }
        out.coefficients.insert(index.clone(), pair.abs().inverse()?.certified());
    }
    match err {
        Some(lattice) => Err(DiophantineError::ResonantDenominator(lattice)),
        None => Ok(out),
    }
}

/// Coefficient-wise product on the common support.
pub fn hadamard_apply(h: &FourierTable, f: &FourierTable) -> FourierTable {
    let mut out = FourierTable::new(format!("({})*({})", h.source, f.source));
    for (k, a) in &h.coefficients {
        if let Some(b) = f.coefficients.get(k) {
            let value = a.value * b.value;
            let error = a.value.abs() * b.error + b.value.abs() * a.error + a.error * b.error;
            let rounding = if is_exact_product(a.value, b.value) { 0.0 } else { value.abs() * f64::EPSILON };
            out.coefficients.insert(k.clone(), CertifiedDecimal::new(value, error + rounding));
        }
    }
    out
}

/// True when `a·b` is representable, checked with an error-free transformation.
fn is_exact_product(a: f64, b: f64) -> bool {
    let p = a * b;
    a.mul_add(b, -p) == 0.0
}

/// Least-squares line `log|a_I| ≈ slope·‖I‖ + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square deviation of the logarithms from the line.
    pub residual: f64,
    pub points: usize,
}

pub fn decay_fit(f: &FourierTable) -> Result<DecayFit, DiophantineError> {
    let pts: Vec<(f64, f64)> = f
        .coefficients
        .iter()
        .filter(|(_, c)| c.value > 0.0)
        .map(|(k, c)| (k.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt(), c.value.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(DiophantineError::InsufficientSupport(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(DiophantineError::InvalidInput("all indices have the same norm".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Ok(DecayFit { slope, intercept, residual, points: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarContext;

    fn norm(v: &[i32]) -> f64 {
        v.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt()
    }

    fn table(entries: &[(i32, f64)]) -> FourierTable {
        let mut t = FourierTable::new("test");
        for &(k, v) in entries {
            t.insert(vec![k], v);
        }
        t
    }

    #[test]
    fn hadamard_examples() {
        let h = table(&[(1, 2.0), (2, 3.0)]);
        let f = table(&[(1, 5.0), (3, 7.0)]);
        let p = hadamard_apply(&h, &f);
        assert_eq!(p.len(), 1);
        assert_eq!(p.get(&[1]), Some(&CertifiedDecimal::new(10.0, 0.0)));
        let ones = FourierTable::from_fn(1, 3, "ones", |_| 1.0);
        let g = FourierTable::from_fn(1, 3, "g", |v| (v[0] * v[0]) as f64);
        assert_eq!(hadamard_apply(&ones, &g).coefficients, g.coefficients);
    }

    #[test]
    fn small_denominators_of_sqrt2() {
        let ctx = ScalarContext::quadratic(2).unwrap();
        let omega = FrequencyVector::parse(ctx, &["1", "[0, 1, 2]"]).unwrap();
        let t = small_denominator_series(&omega, 3).unwrap();
        assert_eq!(t.len(), 48);
        assert!(t.get(&[1, -1]).unwrap().contains(1.0 + std::f64::consts::SQRT_2));
        assert!(t.get(&[0, 1]).unwrap().contains(std::f64::consts::FRAC_1_SQRT_2));
        let resonant = FrequencyVector::parse(ScalarContext::Rational, &["1", "2"]).unwrap();
        assert_eq!(small_denominator_series(&resonant, 2), Err(DiophantineError::ResonantDenominator(vec![2, -1])));
    }

    #[test]
    fn fits() {
        let t = FourierTable::from_fn(2, 20, "exp", |v| (-2.0 * norm(v)).exp());
        let fit = decay_fit(&t).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-6);
        assert!(fit.residual < 1e-9);
        let t = FourierTable::from_fn(1, 20, "grow", |v| norm(v).exp());
        assert!((decay_fit(&t).unwrap().slope - 1.0).abs() < 1e-6);
        let slopes: Vec<f64> = [10, 40, 160]
            .iter()
            .map(|&n| decay_fit(&FourierTable::from_fn(1, n, "poly", |v| norm(v).powi(3))).unwrap().slope)
            .collect();
        assert!(slopes[0] > slopes[1] && slopes[1] > slopes[2] && slopes[2] > 0.0);
        assert!(matches!(decay_fit(&table(&[(1, 1.0), (2, 0.0)])), Err(DiophantineError::InsufficientSupport(1))));
    }

    #[test]
    fn hadamard_inverse_keeps_exponential_decay() {
        let ctx = ScalarContext::quadratic(2).unwrap();
        let omega = FrequencyVector::parse(ctx, &["1", "[0, 1, 2]"]).unwrap();
        let h = small_denominator_series(&omega, 15).unwrap();
        let f = FourierTable::from_fn(2, 15, "exp", |v| (-2.0 * norm(v)).exp());
        let fit = decay_fit(&hadamard_apply(&h, &f)).unwrap();
        assert!(fit.slope < -1.0, "{fit:?}");
    }
}
