//! Small dense-matrix helpers on top of `nalgebra`.

use nalgebra::{Cholesky, DMatrix, Dyn};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;

pub(crate) fn cholesky(m: &Matrix) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(m.clone()).ok_or(Error::NotPositiveDefinite)
}

/// `log det M` for a symmetric positive definite matrix, via Cholesky.
pub fn log_det_spd(m: &Matrix) -> Result<f64> {
    let chol = cholesky(m)?;
    Ok(2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>())
}

/// Inverse of a symmetric positive definite matrix, symmetrized.
pub fn inverse_spd(m: &Matrix) -> Result<Matrix> {
    let inv = cholesky(m)?.inverse();
    Ok((&inv + inv.transpose()) * 0.5)
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Relative Frobenius distance `||a - b||_F / ||b||_F`.
pub fn relative_frobenius(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm() / b.norm()
}

/// Reverses both row and column order.
pub fn reverse_both(m: &Matrix) -> Matrix {
    let n = m.nrows();
    Matrix::from_fn(n, n, |i, j| m[(n - 1 - i, n - 1 - j)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn log_det_of_known_matrix() {
        let m = Matrix::from_row_slice(2, 2, &[3.75, -0.75, -0.75, 3.75]);
        assert_relative_eq!(log_det_spd(&m).unwrap(), 13.5f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn indefinite_is_rejected() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(log_det_spd(&m).unwrap_err(), Error::NotPositiveDefinite);
        assert!(inverse_spd(&m).is_err());
    }
}
