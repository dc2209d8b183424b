//! Spectra and determinants of the precision matrices.
//!
//! The trigonometric precision matrix has the simple eigenvalues
//! `lambda_k = 2k(2N + alpha + beta + 1 - k)`, `k = 1..N`, with eigenvectors
//! `v_k = (q_{k-1}(z_j) sqrt(1 - z_j^2))_j`, where `q_0, q_1, ...` are the
//! orthonormal polynomials of the discrete measure `sum_j (1 - z_j^2) delta_{z_j}`.

use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freeze::FreezePoint;
use crate::linalg::{log_det_spd, Matrix};
use crate::params::EnsembleParams;
use crate::precision::{build_algebraic, build_trigonometric, PrecisionMatrix};
use crate::special::{log_factorial, log_pochhammer};

const BREAKDOWN_NORM: f64 = 1e-14;

/// Eigenvalues (ascending) and unit eigenvectors (columns) of a symmetric
/// matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Largest `||M v_k - lambda_k v_k||_2` over the columns.
    pub fn max_residual(&self, m: &Matrix) -> f64 {
        (0..self.n())
            .map(|k| {
                let v = self.eigenvectors.column(k);
                (m * v - v * self.eigenvalues[k]).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Flips `v` so its first component that is not negligible is positive.
pub fn canonical_sign(v: &mut [f64]) {
    let scale = v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * scale) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Full eigendecomposition of a symmetric matrix, sorted ascending, with the
/// sign of each eigenvector fixed by [`canonical_sign`].
pub fn symmetric_eigendecompose(m: &Matrix) -> Result<SpectralDecomposition> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: m.ncols(),
        });
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or(Error::EigenConvergence { iterations: 10_000 })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = Matrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        let mut col: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
        canonical_sign(&mut col);
        eigenvectors.set_column(k, &nalgebra::DVector::from_vec(col));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `[lambda_1, ..., lambda_N]`, `lambda_k = 2k(2N + alpha + beta + 1 - k)`.
pub fn closed_form_spectrum(params: &EnsembleParams) -> Vec<f64> {
    let n = params.n() as f64;
    let c = 2.0 * n + params.alpha() + params.beta() + 1.0;
    (1..=params.n())
        .map(|k| {
            let k = k as f64;
            2.0 * k * (c - k)
        })
        .collect()
}

/// Orthonormal polynomials of the discrete measure `sum_j w_j delta_{z_j}`
/// with `w_j = 1 - z_j^2`, in recurrence form
/// `b_{k+1} q_{k+1}(x) = (x - a_k) q_k(x) - b_k q_{k-1}(x)`.
#[derive(Debug, Clone, Serialize)]
pub struct DiscreteOPBasis {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Constant value of `q_0`.
    pub q0: f64,
    /// `a_0, ..., a_{N-2}`.
    pub diag: Vec<f64>,
    /// `b_1, ..., b_{N-1}`, all positive.
    pub offdiag: Vec<f64>,
}

impl DiscreteOPBasis {
    /// Number of polynomials, `q_0` through `q_{N-1}`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `q_0(x), ..., q_{N-1}(x)`.
    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        let n = self.len();
        let mut out = Vec::with_capacity(n);
        out.push(self.q0);
        let mut prev = 0.0;
        for k in 0..n - 1 {
            let back = if k == 0 { 0.0 } else { self.offdiag[k - 1] * prev };
            let next = ((x - self.diag[k]) * out[k] - back) / self.offdiag[k];
            prev = out[k];
            out.push(next);
        }
        out
    }

    /// `q_k(x)`.
    pub fn eval(&self, k: usize, x: f64) -> f64 {
        self.eval_all(x)[k]
    }

    /// Gram matrix `G_lk = sum_j q_l(z_j) q_k(z_j) w_j`.
    pub fn gram(&self) -> Matrix {
        let n = self.len();
        let values: Vec<Vec<f64>> = self.nodes.iter().map(|&x| self.eval_all(x)).collect();
        Matrix::from_fn(n, n, |l, k| {
            (0..n)
                .map(|j| values[j][l] * values[j][k] * self.weights[j])
                .sum()
        })
    }

    /// The vector `(q_k(z_j) sqrt(w_j))_j`, normalized to unit length with
    /// canonical sign.
    pub fn eigenvector_candidate(&self, k: usize) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| self.eval(k, x) * w.sqrt())
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        canonical_sign(&mut v);
        v
    }
}

/// Stieltjes procedure on the weighted nodes `(z_j, 1 - z_j^2)`.
pub fn build_discrete_op_basis(freeze: &FreezePoint) -> Result<DiscreteOPBasis> {
    let nodes = freeze.z.clone();
    let weights = freeze.one_minus_z_sq();
    let n = nodes.len();
    let inner = |u: &[f64], v: &[f64]| -> f64 { (0..n).map(|j| u[j] * v[j] * weights[j]).sum() };

    let total: f64 = weights.iter().sum();
    if total.sqrt() <= BREAKDOWN_NORM {
        return Err(Error::Breakdown {
            degree: 0,
            norm: total.sqrt(),
        });
    }
    let q0 = 1.0 / total.sqrt();
    let mut diag = Vec::with_capacity(n.saturating_sub(1));
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    let mut prev = vec![0.0; n];
    let mut cur = vec![q0; n];
    for k in 0..n - 1 {
        let x_cur: Vec<f64> = nodes.iter().zip(&cur).map(|(x, q)| x * q).collect();
        let a = inner(&x_cur, &cur);
        let b_prev = if k == 0 { 0.0 } else { offdiag[k - 1] };
        let next: Vec<f64> = (0..n)
            .map(|j| x_cur[j] - a * cur[j] - b_prev * prev[j])
            .collect();
        let norm = inner(&next, &next).sqrt();
        if norm <= BREAKDOWN_NORM {
            return Err(Error::Breakdown { degree: k + 1, norm });
        }
        diag.push(a);
        offdiag.push(norm);
        prev = cur;
        cur = next.iter().map(|v| v / norm).collect();
    }
    Ok(DiscreteOPBasis {
        nodes,
        weights,
        q0,
        diag,
        offdiag,
    })
}

/// Outcome of checking one eigenpair `(lambda_k, v_k)` of `S~`.
#[derive(Debug, Clone, Serialize)]
pub struct EigenvectorCheck {
    pub k: usize,
    pub eigenvalue: f64,
    /// `||S~ u_k - lambda_k u_k||_2` for the unit candidate `u_k`.
    pub residual: f64,
    /// `|<u_k, v_k>|` against the numerically computed eigenvector.
    pub cosine: f64,
}

/// Checks every constructed eigenvector against the closed-form eigenvalue
/// and the numerical eigenvector. Returns the checks and `||S~||_2`.
pub fn verify_eigenvectors(
    s_tilde: &PrecisionMatrix,
    basis: &DiscreteOPBasis,
) -> Result<(Vec<EigenvectorCheck>, f64)> {
    let n = s_tilde.n();
    if basis.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: basis.len(),
        });
    }
    let numerical = symmetric_eigendecompose(&s_tilde.entries)?;
    let norm = numerical
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let lambdas = closed_form_spectrum(&s_tilde.freeze.params);
    let checks = (0..n)
        .map(|k| {
            let u = nalgebra::DVector::from_vec(basis.eigenvector_candidate(k));
            let residual = (&s_tilde.entries * &u - &u * lambdas[k]).norm();
            let cosine = u.dot(&numerical.eigenvectors.column(k)).abs();
            EigenvectorCheck {
                k: k + 1,
                eigenvalue: lambdas[k],
                residual,
                cosine,
            }
        })
        .collect();
    Ok((checks, norm))
}

/// A closed-form log-determinant paired with its numerical counterpart.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LogDetComparison {
    pub closed_form_log_det: f64,
    pub numerical_log_det: f64,
}

impl LogDetComparison {
    pub fn abs_diff(&self) -> f64 {
        (self.closed_form_log_det - self.numerical_log_det).abs()
    }
}

/// `log det S = log N! - 3N log 2 + 3 log (N+alpha+beta+1)_N - log (alpha+1)_N - log (beta+1)_N`.
pub fn closed_form_log_det_algebraic(params: &EnsembleParams) -> f64 {
    let n = params.n();
    let (alpha, beta) = (params.alpha(), params.beta());
    let top = log_pochhammer(n as f64 + alpha + beta + 1.0, n).expect("positive argument");
    log_factorial(n) - 3.0 * n as f64 * std::f64::consts::LN_2 + 3.0 * top
        - log_pochhammer(alpha + 1.0, n).expect("alpha > -1")
        - log_pochhammer(beta + 1.0, n).expect("beta > -1")
}

/// `log det S~ = N log 2 + log N! + log (N+alpha+beta+1)_N`.
pub fn closed_form_log_det_trigonometric(params: &EnsembleParams) -> f64 {
    let n = params.n();
    n as f64 * std::f64::consts::LN_2
        + log_factorial(n)
        + log_pochhammer(n as f64 + params.alpha() + params.beta() + 1.0, n).expect("positive argument")
}

pub fn determinant_algebraic(params: &EnsembleParams) -> Result<LogDetComparison> {
    let s = build_algebraic(&FreezePoint::new(*params)?);
    Ok(LogDetComparison {
        closed_form_log_det: closed_form_log_det_algebraic(params),
        numerical_log_det: log_det_spd(&s.entries)?,
    })
}

/// Trigonometric determinant check plus `sum_k log lambda_k`.
pub fn determinant_trigonometric(params: &EnsembleParams) -> Result<(LogDetComparison, f64)> {
    let st = build_trigonometric(&FreezePoint::new(*params)?);
    let spectrum_log_det = closed_form_spectrum(params).iter().map(|l| l.ln()).sum();
    Ok((
        LogDetComparison {
            closed_form_log_det: closed_form_log_det_trigonometric(params),
            numerical_log_det: log_det_spd(&st.entries)?,
        },
        spectrum_log_det,
    ))
}
