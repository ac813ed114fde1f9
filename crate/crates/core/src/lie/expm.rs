use super::Matrix;

/// `e^X` by scaling and squaring with a Taylor core on `‖X/2^s‖₁ ≤ 1/2`.
pub fn matrix_exp(x: &Matrix) -> Matrix {
    let n = x.nrows();
    let norm1 = (0..n).map(|j| x.column(j).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let s = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as i32 } else { 0 };
    let y = x / 2f64.powi(s);
    let mut sum = Matrix::identity(n, n);
    let mut term = Matrix::identity(n, n);
    for k in 1..40 {
        term = &term * &y / k as f64;
        sum += &term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_values() {
        assert_eq!(matrix_exp(&Matrix::zeros(3, 3)), Matrix::identity(3, 3));
        let d = matrix_exp(&Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.5, -4.0])));
        assert!((d[(0, 0)] - 1.5f64.exp()).abs() < 1e-12 * 1.5f64.exp());
        assert!((d[(1, 1)] - (-4.0f64).exp()).abs() < 1e-12 * (-4.0f64).exp());
        assert_eq!(d[(0, 1)], 0.0);
        let nil = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(matrix_exp(&nil), Matrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]));
    }

    #[test]
    fn rotation_and_inverse() {
        let t = 7.3;
        let r = matrix_exp(&Matrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]));
        let expected = Matrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        assert!((r - expected).norm() < 1e-12);
        let x = Matrix::from_row_slice(3, 3, &[0.3, -1.2, 2.0, 0.7, 0.1, -0.4, 1.1, 0.9, -2.2]);
        let p = matrix_exp(&x) * matrix_exp(&(-&x));
        assert!((p - Matrix::identity(3, 3)).norm() < 1e-12);
    }
}
