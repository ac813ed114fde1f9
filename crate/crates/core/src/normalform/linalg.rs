//! Exact Gaussian elimination over a scalar field.

use crate::scalar::{Scalar, ScalarContext};

/// Determinant by Gaussian elimination with exact pivots.
pub fn determinant(m: &[Vec<Scalar>], ctx: ScalarContext) -> Scalar {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut det = ctx.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return ctx.zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det = &det * &a[col][col];
        let inv = a[col][col].inverse().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in col..n {
                let v = &a[r][c] - &(&factor * &a[col][c]);
                a[r][c] = v;
            }
        }
    }
    det
}

/// Solves `m · x = rhs`; `None` when `m` is singular.
pub fn solve_linear(m: &[Vec<Scalar>], rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.iter().zip(rhs).map(|(row, b)| {
        let mut r = row.clone();
        r.push(b.clone());
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let inv = a[col][col].inverse().ok()?;
        for c in col..=n {
            a[col][c] = &a[col][c] * &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..=n {
                let v = &a[r][c] - &(&factor * &a[col][c]);
                a[r][c] = v;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}
