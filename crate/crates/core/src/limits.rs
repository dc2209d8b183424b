//! Hermite and Laguerre degenerations of the algebraic precision matrix.
//!
//! * `alpha = beta -> inf` (`a = 0`): `sqrt(alpha) z^(alpha) -> z^H` (zeros of
//!   `H_N`) and `S^(alpha) / alpha -> S^H`, `det S^H = N!`.
//! * `alpha -> inf`, `beta` fixed: `(alpha/2)(1 + z^(alpha)) -> z^L` (zeros of
//!   `L_N^(beta)`) and `(8/alpha^2) S^(alpha) -> S^L`,
//!   `det S^L = N! / (beta+1)_N`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freeze::{polish_roots, FreezePoint};
use crate::linalg::{relative_frobenius, Matrix};
use crate::params::EnsembleParams;
use crate::precision::build_algebraic;
use crate::recurrence::{hermite_matrix, laguerre_matrix};

#[derive(Debug, Clone)]
pub struct HermiteLimit {
    pub n: usize,
    pub zeros_h: Vec<f64>,
    pub s_h: Matrix,
}

#[derive(Debug, Clone)]
pub struct LaguerreLimit {
    pub n: usize,
    pub beta_param: f64,
    pub zeros_l: Vec<f64>,
    pub s_l: Matrix,
}

/// `(H_n(x), H_n'(x))` for the physicists' Hermite polynomials.
pub fn hermite_eval_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, 2.0 * n as f64 * prev)
}

/// `(L_n^(beta)(x), d/dx L_n^(beta)(x))`, using
/// `x L_n' = n L_n - (n + beta) L_{n-1}`.
pub fn laguerre_eval_with_derivative(n: usize, beta: f64, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + beta - x) * cur - (kf + beta) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    let nf = n as f64;
    (cur, (nf * cur - (nf + beta) * prev) / x)
}

fn interaction_matrix(z: &[f64], coupling: f64, wall: impl Fn(f64) -> f64) -> Matrix {
    let n = z.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = -coupling / (z[i] - z[j]).powi(2);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    for i in 0..n {
        let off: f64 = (0..n).filter(|&l| l != i).map(|l| -m[(i, l)]).sum();
        m[(i, i)] = wall(z[i]) + off;
    }
    m
}

pub fn build_hermite_limit(n: usize) -> Result<HermiteLimit> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            constraint: "n >= 1",
            value: 0.0,
        });
    }
    let mut zeros_h = hermite_matrix(n).eigenvalues()?;
    polish_roots(&mut zeros_h, |x| hermite_eval_with_derivative(n, x))?;
    let s_h = interaction_matrix(&zeros_h, 1.0, |_| 1.0);
    Ok(HermiteLimit { n, zeros_h, s_h })
}

pub fn build_laguerre_limit(n: usize, beta_param: f64) -> Result<LaguerreLimit> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            constraint: "n >= 1",
            value: 0.0,
        });
    }
    if beta_param.is_nan() || beta_param <= -1.0 {
        return Err(Error::InvalidParameter {
            name: "beta",
            constraint: "beta > -1",
            value: beta_param,
        });
    }
    let mut zeros_l = laguerre_matrix(n, beta_param).eigenvalues()?;
    polish_roots(&mut zeros_l, |x| laguerre_eval_with_derivative(n, beta_param, x))?;
    let s_l = interaction_matrix(&zeros_l, 2.0, |x| (beta_param + 1.0) / (x * x));
    Ok(LaguerreLimit {
        n,
        beta_param,
        zeros_l,
        s_l,
    })
}

/// `z_j - sum_{l != j} 1/(z_j - z_l)`; vanishes at the zeros of `H_N`.
pub fn hermite_stationarity_residual(z: &[f64]) -> Vec<f64> {
    z.iter()
        .enumerate()
        .map(|(j, &zj)| {
            let s: f64 = z
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != j)
                .map(|(_, &zl)| 1.0 / (zj - zl))
                .sum();
            zj - s
        })
        .collect()
}

/// `(beta+1)/z_j - 1 + 2 sum_{l != j} 1/(z_j - z_l)`; vanishes at the zeros
/// of `L_N^(beta)` (from `x y'' + (beta + 1 - x) y' + N y = 0`).
pub fn laguerre_stationarity_residual(z: &[f64], beta: f64) -> Vec<f64> {
    z.iter()
        .enumerate()
        .map(|(j, &zj)| {
            let s: f64 = z
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != j)
                .map(|(_, &zl)| 1.0 / (zj - zl))
                .sum();
            (beta + 1.0) / zj - 1.0 + 2.0 * s
        })
        .collect()
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvergencePoint {
    pub alpha: f64,
    /// Relative Frobenius distance of the rescaled Jacobi matrix to the limit.
    pub matrix_distance: f64,
    /// Max distance of the rescaled Jacobi zeros to the limit zeros.
    pub zero_distance: f64,
    /// `log det` of the rescaled Jacobi matrix, from its closed form.
    pub scaled_log_det: f64,
}

/// `(S^(alpha)/alpha, sqrt(alpha) z^(alpha))` distances to the Hermite limit,
/// with `S^(alpha)` built at `a = 0, b = alpha + 1`.
pub fn hermite_convergence(n: usize, alphas: &[f64]) -> Result<Vec<ConvergencePoint>> {
    let limit = build_hermite_limit(n)?;
    alphas
        .iter()
        .map(|&alpha| {
            let params = EnsembleParams::from_jacobi(n, alpha, alpha, 1.0)?;
            let fp = FreezePoint::new(params)?;
            let scaled = build_algebraic(&fp).entries / alpha;
            let zero_distance = fp
                .z
                .iter()
                .zip(&limit.zeros_h)
                .map(|(z, h)| (alpha.sqrt() * z - h).abs())
                .fold(0.0, f64::max);
            Ok(ConvergencePoint {
                alpha,
                matrix_distance: relative_frobenius(&scaled, &limit.s_h),
                zero_distance,
                scaled_log_det: crate::spectral::closed_form_log_det_algebraic(&params)
                    - n as f64 * alpha.ln(),
            })
        })
        .collect()
}

/// `((8/alpha^2) S^(alpha), (alpha/2)(1 + z^(alpha)))` distances to the
/// Laguerre limit, with `S^(alpha)` built at fixed `beta` (`b = beta + 1`).
pub fn laguerre_convergence(n: usize, beta_param: f64, alphas: &[f64]) -> Result<Vec<ConvergencePoint>> {
    let limit = build_laguerre_limit(n, beta_param)?;
    alphas
        .iter()
        .map(|&alpha| {
            let params = EnsembleParams::from_jacobi(n, alpha, beta_param, 1.0)?;
            let fp = FreezePoint::new(params)?;
            let factor = 8.0 / (alpha * alpha);
            let scaled = build_algebraic(&fp).entries * factor;
            let zero_distance = fp
                .z
                .iter()
                .zip(&limit.zeros_l)
                .map(|(z, l)| (0.5 * alpha * (1.0 + z) - l).abs())
                .fold(0.0, f64::max);
            Ok(ConvergencePoint {
                alpha,
                matrix_distance: relative_frobenius(&scaled, &limit.s_l),
                zero_distance,
                scaled_log_det: crate::spectral::closed_form_log_det_algebraic(&params)
                    + n as f64 * factor.ln(),
            })
        })
        .collect()
}

pub fn is_strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}
