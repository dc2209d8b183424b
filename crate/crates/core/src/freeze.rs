//! The freezing point of a beta-Jacobi ensemble.
//!
//! For `a >= 0, b > 0` the function
//! `phi(x) = prod_{i<j} (x_j - x_i) * prod_j (1 - x_j)^{(a+b)/2} (1 + x_j)^{b/2}`
//! attains its unique maximum on the ordered alcove at the zeros `z` of
//! `P_N^(alpha, beta)`, `alpha = a + b - 1`, `beta = b - 1`. The ensemble
//! concentrates at `z` as `kappa -> inf`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::EnsembleParams;
use crate::recurrence::JacobiRecurrence;
use crate::special::jacobi_eval_with_derivative;

const MAX_NEWTON_STEPS: usize = 5;

/// Ordered zeros of `P_N^(alpha, beta)` with the closed-form scalars attached
/// to them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreezePoint {
    pub params: EnsembleParams,
    /// Zeros, ascending: `-1 < z_1 < ... < z_N < 1`.
    pub z: Vec<f64>,
    /// Trigonometric drift `t_j = arccos(z_j) / 2`, descending.
    pub t: Vec<f64>,
    pub log_phi: f64,
    pub log_prod_one_minus: f64,
    pub log_prod_one_plus: f64,
}

impl FreezePoint {
    pub fn new(params: EnsembleParams) -> Result<Self> {
        let z = compute_zeros(&params)?;
        let t = z.iter().map(|&x| 0.5 * x.acos()).collect();
        let (log_prod_one_minus, log_prod_one_plus) = log_products(&params);
        Ok(Self {
            log_phi: log_phi_closed_form(&params),
            log_prod_one_minus,
            log_prod_one_plus,
            params,
            z,
            t,
        })
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// `(1 - z_j^2)` for every node.
    pub fn one_minus_z_sq(&self) -> Vec<f64> {
        self.z.iter().map(|&x| (1.0 - x) * (1.0 + x)).collect()
    }

    pub fn stationarity_residual(&self) -> Vec<f64> {
        stationarity_residual(&self.z, &self.params)
    }
}

/// Zeros of `P_N^(alpha, beta)` in ascending order.
///
/// Eigenvalues of the recurrence matrix are refined by Newton's method on
/// the polynomial itself.
pub fn compute_zeros(params: &EnsembleParams) -> Result<Vec<f64>> {
    jacobi_zeros(params.n(), params.alpha(), params.beta())
}

pub(crate) fn jacobi_zeros(n: usize, alpha: f64, beta: f64) -> Result<Vec<f64>> {
    let recurrence = JacobiRecurrence::new(n, alpha, beta)?;
    let mut z = recurrence.matrix().eigenvalues()?;
    polish_roots(&mut z, |x| {
        jacobi_eval_with_derivative(n, alpha, beta, x).expect("indices validated by the recurrence")
    })?;
    Ok(z)
}

/// Newton refinement of simple, sorted roots. The tolerance for root `j` is
/// `1e-13` times its distance to the nearest neighbour, floored at a few ulps.
pub(crate) fn polish_roots<F>(roots: &mut [f64], eval: F) -> Result<()>
where
    F: Fn(f64) -> (f64, f64),
{
    let n = roots.len();
    let gaps: Vec<f64> = (0..n)
        .map(|j| {
            let left = if j > 0 { roots[j] - roots[j - 1] } else { f64::INFINITY };
            let right = if j + 1 < n { roots[j + 1] - roots[j] } else { f64::INFINITY };
            let g = left.min(right);
            if g.is_finite() {
                g
            } else {
                1.0
            }
        })
        .collect();
    for (j, root) in roots.iter_mut().enumerate() {
        let tol = 1e-13 * gaps[j] + 4.0 * f64::EPSILON * root.abs();
        let mut last_step = f64::INFINITY;
        let mut converged = false;
        for _ in 0..MAX_NEWTON_STEPS {
            let (p, dp) = eval(*root);
            if p == 0.0 {
                converged = true;
                break;
            }
            let step = p / dp;
            *root -= step;
            last_step = step.abs();
            if last_step <= tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence { index: j, last_step });
        }
    }
    roots.sort_by(|x, y| x.total_cmp(y));
    Ok(())
}

/// Left-hand side of the stationarity (electrostatic) equations
/// `sum_{i != j} 1/(z_j - z_i) + (a+b)/2 / (z_j - 1) + b/2 / (z_j + 1)`.
pub fn stationarity_residual(z: &[f64], params: &EnsembleParams) -> Vec<f64> {
    let upper = (params.a() + params.b()) / 2.0;
    let lower = params.b() / 2.0;
    z.iter()
        .enumerate()
        .map(|(j, &zj)| {
            let repulsion: f64 = z
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &zi)| 1.0 / (zj - zi))
                .sum();
            repulsion + upper / (zj - 1.0) + lower / (zj + 1.0)
        })
        .collect()
}

/// `log phi(z)` at the maximizer, from the discriminant formula.
pub fn log_phi_closed_form(params: &EnsembleParams) -> f64 {
    let n = params.n() as f64;
    let (alpha, beta) = (params.alpha(), params.beta());
    let xlogx = |x: f64| 0.5 * x * x.ln();
    let head = 0.5 * n * (n + alpha + beta + 1.0) * std::f64::consts::LN_2;
    let body: f64 = (1..=params.n())
        .map(|j| {
            let j = j as f64;
            xlogx(j) + xlogx(alpha + j) + xlogx(beta + j) - xlogx(n + alpha + beta + j)
        })
        .sum();
    head + body
}

/// `log phi(x)` evaluated termwise from its definition.
pub fn log_phi_direct(z: &[f64], params: &EnsembleParams) -> f64 {
    let upper = (params.a() + params.b()) / 2.0;
    let lower = params.b() / 2.0;
    let mut acc = 0.0;
    for (j, &zj) in z.iter().enumerate() {
        for &zi in &z[..j] {
            acc += (zj - zi).ln();
        }
        acc += upper * (-zj).ln_1p() + lower * zj.ln_1p();
    }
    acc
}

/// `(log prod (1 - z_j), log prod (1 + z_j))` from the closed forms
/// `2^N prod (alpha + j)/(N + alpha + beta + j)` and the same with `beta`.
pub fn log_products(params: &EnsembleParams) -> (f64, f64) {
    let n = params.n() as f64;
    let (alpha, beta) = (params.alpha(), params.beta());
    let mut minus = n * std::f64::consts::LN_2;
    let mut plus = minus;
    for j in 1..=params.n() {
        let j = j as f64;
        let denom = (n + alpha + beta + j).ln();
        minus += (alpha + j).ln() - denom;
        plus += (beta + j).ln() - denom;
    }
    (minus, plus)
}

/// `(log prod (1 - z_j), log prod (1 + z_j))` summed over given nodes.
pub fn log_products_direct(z: &[f64]) -> (f64, f64) {
    let minus = z.iter().map(|&x| (-x).ln_1p()).sum();
    let plus = z.iter().map(|&x| x.ln_1p()).sum();
    (minus, plus)
}
