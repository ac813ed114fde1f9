use num_bigint::BigInt;
use num_traits::{Pow, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::for_each_half_ball;
use crate::scalar::{rational_to_f64, Rational};

use super::{norm_power, DiophantineError};

/// Fixed so that results do not depend on the thread pool.
pub const PARTITIONS: u64 = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureParams {
    pub n: usize,
    pub radius: f64,
    pub c: f64,
    /// Rational literal such as `"1"` or `"1/2"`.
    pub nu: String,
    pub cutoff: u32,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub fraction_bad: f64,
    pub stderr: f64,
    pub bad: u64,
    pub samples: u64,
    pub partitions: u64,
    /// Samples decided by the exact rational re-test.
    pub borderline: u64,
    /// Smallest relative distance `|value − C|/C` among float decisions.
    pub min_margin: f64,
}

struct Lattice {
    v: Vec<f64>,
    weight: f64,
    tol: f64,
    exact: Vec<i32>,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    bad: u64,
    borderline: u64,
    min_margin: f64,
}

fn sample_ball(rng: &mut ChaCha8Rng, n: usize, r: f64, out: &mut [f64]) {
    loop {
        for x in out.iter_mut() {
            *x = (2.0 * rng.gen::<f64>() - 1.0) * r;
        }
        if out.iter().map(|x| x * x).sum::<f64>() <= r * r {
            return;
        }
        debug_assert_eq!(out.len(), n);
    }
}

/// `|(ω,I)|·‖I‖^{a/b} < C` decided in exact rationals for the float sample `ω`.
fn exact_violation(omega: &[f64], lattice: &[i32], e: &Rational, c: &Rational) -> bool {
    let pair: Rational = omega
        .iter()
        .zip(lattice)
        .map(|(&w, &i)| Rational::from_float(w).expect("finite sample") * Rational::from_integer(BigInt::from(i)))
        .sum();
    let b = e.denom().to_u32().expect("small exponent");
    let a = e.numer().to_i32().expect("small exponent");
    let s = Rational::from_integer(BigInt::from(lattice.iter().map(|&x| (x as i64) * (x as i64)).sum::<i64>()));
    let lhs = Pow::pow(pair.abs(), 2 * b) * if a >= 0 { Pow::pow(s, a as u32) } else { Pow::pow(s.recip(), a.unsigned_abs()) };
    lhs < Pow::pow(c.clone(), 2 * b)
}

/// Monte-Carlo estimate of the share of `B_R` violating `|(ω,I)| ≥ C/‖I‖^{n−1+ν}` for some
/// `0 < ‖I‖_∞ ≤ N`.
pub fn measure_estimate(p: &MeasureParams) -> Result<MeasureEstimate, DiophantineError> {
    let nu = crate::scalar::ScalarContext::Rational
        .parse(&p.nu)?
        .as_rational()
        .ok_or_else(|| DiophantineError::InvalidInput("ν must be rational".into()))?;
    if p.samples == 0 || !nu.is_positive() || p.n == 0 || !(p.radius > 0.0) || !(p.c >= 0.0) || p.cutoff == 0 {
        return Err(DiophantineError::InvalidInput("need samples ≥ 1, ν > 0, n ≥ 1, R > 0, C ≥ 0, N ≥ 1".into()));
    }
    let e = &nu + Rational::from_integer(BigInt::from(p.n as i64 - 1));
    let e_f = rational_to_f64(&e);
    let c_exact = Rational::from_float(p.c).expect("finite C");
    let eps = f64::EPSILON;
    let mut lattice = Vec::new();
    for_each_half_ball(p.n, p.cutoff, |v| {
        let s: f64 = v.iter().map(|&x| (x as f64) * (x as f64)).sum();
        let weight = norm_power(s, e_f);
        // |Σ ω_i I_i| errs by at most 8(n+1)ε·‖ω‖‖I‖ and ‖ω‖ ≤ R
        let tol = 8.0 * (p.n as f64 + 1.0) * eps * p.radius * s.sqrt() * weight + 32.0 * eps * p.c + 1e-12 * p.c;
        lattice.push(Lattice { v: v.iter().map(|&x| x as f64).collect(), weight, tol, exact: v.to_vec() });
    });
    let tallies: Vec<Tally> = (0..PARTITIONS)
        .into_par_iter()
        .map(|part| {
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            rng.set_stream(part);
            let count = p.samples / PARTITIONS + u64::from(part < p.samples % PARTITIONS);
            let mut tally = Tally { min_margin: f64::INFINITY, ..Tally::default() };
            let mut omega = vec![0.0; p.n];
            let mut borderline = Vec::new();
            for _ in 0..count {
                sample_ball(&mut rng, p.n, p.radius, &mut omega);
                borderline.clear();
                let mut bad = false;
                for l in &lattice {
                    let pf: f64 = omega.iter().zip(&l.v).map(|(a, b)| a * b).sum();
                    let val = pf.abs() * l.weight;
                    if val < p.c - l.tol {
                        bad = true;
                        if p.c > 0.0 {
                            tally.min_margin = tally.min_margin.min((p.c - val) / p.c);
                        }
                        break;
                    }
                    if val < p.c + l.tol {
                        borderline.push(&l.exact);
                    } else if p.c > 0.0 {
                        tally.min_margin = tally.min_margin.min((val - p.c) / p.c);
                    }
                }
                if !bad && !borderline.is_empty() {
                    tally.borderline += 1;
                    bad = borderline.iter().any(|v| exact_violation(&omega, v, &e, &c_exact));
                }
                tally.bad += u64::from(bad);
            }
            tally
        })
        .collect();
    let bad: u64 = tallies.iter().map(|t| t.bad).sum();
    let borderline = tallies.iter().map(|t| t.borderline).sum();
    let min_margin = tallies.iter().map(|t| t.min_margin).fold(f64::INFINITY, f64::min);
    let frac = bad as f64 / p.samples as f64;
    Ok(MeasureEstimate {
        fraction_bad: frac,
        stderr: (frac * (1.0 - frac) / p.samples as f64).sqrt(),
        bad,
        samples: p.samples,
        partitions: PARTITIONS,
        borderline,
        min_margin,
    })
}
