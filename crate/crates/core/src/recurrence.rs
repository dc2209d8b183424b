//! Symmetric tridiagonal (Jacobi) matrices of orthogonal-polynomial
//! recurrences and their eigenvalues.
//!
//! The zeros of a degree-N orthogonal polynomial are the eigenvalues of the
//! N×N symmetrized monic recurrence matrix (Golub-Welsch). Eigenvalues are
//! computed by the implicit-shift QL iteration.

use crate::error::{Error, Result};

const MAX_QL_ITERATIONS: usize = 60;

/// A real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// Sub-diagonal; length `diag.len() - 1`.
    pub offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len().saturating_sub(1),
                actual: offdiag.len(),
            });
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.dim();
        let mut d = self.diag.clone();
        // e[i] couples d[i] and d[i + 1]; e[n - 1] is scratch.
        let mut e = self.offdiag.clone();
        e.push(0.0);

        for l in 0..n {
            let mut iter = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::EigenConvergence { iterations: iter });
                }
                // Wilkinson-style shift from the leading 2x2 block.
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
                let mut i = m;
                let mut deflated_early = false;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        deflated_early = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if deflated_early {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }
        d.sort_by(|x, y| x.total_cmp(y));
        Ok(d)
    }
}

/// Symmetrized monic three-term recurrence of `P_N^(alpha, beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRecurrence {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    matrix: SymTridiagonal,
}

impl JacobiRecurrence {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                constraint: "n >= 1",
                value: 0.0,
            });
        }
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(Error::Domain {
                function: "JacobiRecurrence::new",
                message: format!("requires alpha > -1 and beta > -1 (got alpha={alpha}, beta={beta})"),
            });
        }
        let ab = alpha + beta;
        let diag = (0..n)
            .map(|k| {
                if k == 0 {
                    (beta - alpha) / (ab + 2.0)
                } else {
                    let s = 2.0 * k as f64 + ab;
                    (beta * beta - alpha * alpha) / (s * (s + 2.0))
                }
            })
            .collect();
        let offdiag = (1..n)
            .map(|k| {
                let kf = k as f64;
                let s = 2.0 * kf + ab;
                let sq = if k == 1 {
                    // (k + a + b) / (s - 1) == 1 at k = 1; written out so that
                    // a + b = -1 does not produce 0/0.
                    4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0).powi(2) * (ab + 3.0))
                } else {
                    4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
                };
                sq.sqrt()
            })
            .collect();
        Ok(Self {
            n,
            alpha,
            beta,
            matrix: SymTridiagonal { diag, offdiag },
        })
    }

    pub fn diag(&self) -> &[f64] {
        &self.matrix.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.matrix.offdiag
    }

    pub fn matrix(&self) -> &SymTridiagonal {
        &self.matrix
    }
}

/// Recurrence matrix for the physicists' Hermite polynomials `H_N`.
pub fn hermite_matrix(n: usize) -> SymTridiagonal {
    SymTridiagonal {
        diag: vec![0.0; n],
        offdiag: (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect(),
    }
}

/// Recurrence matrix for the generalized Laguerre polynomials `L_N^(beta)`.
pub fn laguerre_matrix(n: usize, beta: f64) -> SymTridiagonal {
    SymTridiagonal {
        diag: (0..n).map(|k| 2.0 * k as f64 + beta + 1.0).collect(),
        offdiag: (1..n).map(|k| (k as f64 * (k as f64 + beta)).sqrt()).collect(),
    }
}
