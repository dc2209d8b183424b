//! Precision (inverse covariance) matrices of the freezing CLTs.
//!
//! The algebraic matrix `S` has entries
//!
//! ```text
//! s_jj = sum_{l != j} 1/(z_j - z_l)^2 + (a+b)/2 / (1 - z_j)^2 + b/2 / (1 + z_j)^2
//! s_ij = -1/(z_i - z_j)^2
//! ```
//!
//! and the trigonometric matrix `S~` has entries
//!
//! ```text
//! s~_jj = 4 sum_{l != j} (1 - z_j^2)/(z_j - z_l)^2 + 2(a+b)(1+z_j)/(1-z_j) + 2b(1-z_j)/(1+z_j)
//! s~_ij = -4 sqrt((1 - z_i^2)(1 - z_j^2)) / (z_i - z_j)^2
//! ```
//!
//! Both are built from their own entry formulas. They are related entrywise by
//! `s~_ij = 4 sqrt((1 - z_i^2)(1 - z_j^2)) s_ij`, i.e. `S~ = D S D` with
//! `D = diag(2 sqrt(1 - z_j^2))`, the inverse Jacobian of `t -> cos(2t)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freeze::FreezePoint;
use crate::linalg::{inverse_spd, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coordinates {
    Algebraic,
    Trigonometric,
}

/// A dense symmetric precision matrix tied to the freeze point it was built
/// from.
#[derive(Debug, Clone)]
pub struct PrecisionMatrix {
    pub coords: Coordinates,
    pub entries: Matrix,
    pub freeze: FreezePoint,
}

impl PrecisionMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }
}

/// Builds `S`.
pub fn build_algebraic(freeze: &FreezePoint) -> PrecisionMatrix {
    let z = &freeze.z;
    let n = z.len();
    let upper = (freeze.params.a() + freeze.params.b()) / 2.0;
    let lower = freeze.params.b() / 2.0;
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = -1.0 / (z[i] - z[j]).powi(2);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    for j in 0..n {
        let repulsion: f64 = (0..n).filter(|&l| l != j).map(|l| -m[(j, l)]).sum();
        m[(j, j)] = repulsion + upper / (1.0 - z[j]).powi(2) + lower / (1.0 + z[j]).powi(2);
    }
    PrecisionMatrix {
        coords: Coordinates::Algebraic,
        entries: m,
        freeze: freeze.clone(),
    }
}

/// Builds `S~`.
pub fn build_trigonometric(freeze: &FreezePoint) -> PrecisionMatrix {
    let z = &freeze.z;
    let n = z.len();
    let w = freeze.one_minus_z_sq();
    let (a, b) = (freeze.params.a(), freeze.params.b());
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = -4.0 * (w[i] * w[j]).sqrt() / (z[i] - z[j]).powi(2);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    for j in 0..n {
        let repulsion: f64 = (0..n)
            .filter(|&l| l != j)
            .map(|l| w[j] / (z[j] - z[l]).powi(2))
            .sum();
        m[(j, j)] = 4.0 * repulsion
            + 2.0 * (a + b) * (1.0 + z[j]) / (1.0 - z[j])
            + 2.0 * b * (1.0 - z[j]) / (1.0 + z[j]);
    }
    PrecisionMatrix {
        coords: Coordinates::Trigonometric,
        entries: m,
        freeze: freeze.clone(),
    }
}

/// `max_ij |s~_ij - 4 sqrt((1 - z_i^2)(1 - z_j^2)) s_ij|`.
pub fn cross_relation_residual(s: &PrecisionMatrix, s_tilde: &PrecisionMatrix) -> Result<f64> {
    if s.n() != s_tilde.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            actual: s_tilde.n(),
        });
    }
    let w = s.freeze.one_minus_z_sq();
    let n = s.n();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let mapped = 4.0 * (w[i] * w[j]).sqrt() * s.entries[(i, j)];
            worst = worst.max((s_tilde.entries[(i, j)] - mapped).abs());
        }
    }
    Ok(worst)
}

/// Covariance `P^{-1}` via Cholesky.
pub fn invert_to_covariance(p: &PrecisionMatrix) -> Result<Matrix> {
    inverse_spd(&p.entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, reverse_both};
    use crate::params::EnsembleParams;
    use approx::assert_relative_eq;

    fn freeze(n: usize, a: f64, b: f64) -> FreezePoint {
        FreezePoint::new(EnsembleParams::frozen(n, a, b).unwrap()).unwrap()
    }

    #[test]
    fn algebraic_two_by_two() {
        let s = build_algebraic(&freeze(2, 0.0, 1.0));
        let expected = Matrix::from_row_slice(2, 2, &[3.75, -0.75, -0.75, 3.75]);
        assert!(max_abs(&(&s.entries - &expected)) < 1e-13);
    }

    #[test]
    fn algebraic_scalar() {
        let s = build_algebraic(&freeze(1, 1.0, 1.0));
        assert_relative_eq!(s.entries[(0, 0)], 27.0 / 16.0, epsilon = 1e-14);
    }

    #[test]
    fn trigonometric_small() {
        let s1 = build_trigonometric(&freeze(1, 1.0, 1.0));
        assert_relative_eq!(s1.entries[(0, 0)], 6.0, epsilon = 1e-14);
        let s2 = build_trigonometric(&freeze(2, 0.0, 1.0));
        let expected = Matrix::from_row_slice(2, 2, &[10.0, -2.0, -2.0, 10.0]);
        assert!(max_abs(&(&s2.entries - &expected)) < 1e-13);
    }

    #[test]
    fn cross_relation_small() {
        for fp in [freeze(1, 1.0, 1.0), freeze(2, 0.0, 1.0), freeze(7, 2.0, 0.5)] {
            let s = build_algebraic(&fp);
            let st = build_trigonometric(&fp);
            let r = cross_relation_residual(&s, &st).unwrap();
            assert!(r <= 1e-10 * max_abs(&st.entries), "residual {r}");
        }
    }

    #[test]
    fn cross_relation_dimension_mismatch() {
        let s = build_algebraic(&freeze(2, 0.0, 1.0));
        let st = build_trigonometric(&freeze(3, 0.0, 1.0));
        assert!(matches!(
            cross_relation_residual(&s, &st),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn covariance_inverses() {
        let sigma = invert_to_covariance(&build_algebraic(&freeze(1, 1.0, 1.0))).unwrap();
        assert_relative_eq!(sigma[(0, 0)], 16.0 / 27.0, epsilon = 1e-14);

        let sigma = invert_to_covariance(&build_algebraic(&freeze(2, 0.0, 1.0))).unwrap();
        let expected = Matrix::from_row_slice(2, 2, &[3.75, 0.75, 0.75, 3.75]) / 13.5;
        assert!(max_abs(&(&sigma - &expected)) < 1e-13);
    }

    #[test]
    fn off_diagonals_negative_and_symmetric() {
        let fp = freeze(9, 0.5, 3.0);
        for p in [build_algebraic(&fp), build_trigonometric(&fp)] {
            for i in 0..9 {
                for j in 0..9 {
                    assert_eq!(p.entries[(i, j)], p.entries[(j, i)]);
                    if i != j {
                        assert!(p.entries[(i, j)] < 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn centro_symmetric_when_a_is_zero() {
        let fp = freeze(6, 0.0, 2.5);
        for p in [build_algebraic(&fp), build_trigonometric(&fp)] {
            let scale = max_abs(&p.entries);
            assert!(max_abs(&(&p.entries - reverse_both(&p.entries))) <= 1e-12 * scale);
        }
    }

    #[test]
    fn weighted_row_sums_give_lowest_eigenvalue() {
        let fp = freeze(8, 1.0, 1.0);
        let st = build_trigonometric(&fp);
        let root_w: Vec<f64> = fp.one_minus_z_sq().iter().map(|w| w.sqrt()).collect();
        let lambda1 = 2.0 * (2.0 * 8.0 + fp.params.alpha() + fp.params.beta());
        let scale = max_abs(&st.entries);
        for i in 0..8 {
            let lhs: f64 = (0..8).map(|j| st.entries[(i, j)] * root_w[j]).sum();
            assert!((lhs - lambda1 * root_w[i]).abs() <= 1e-9 * scale);
        }
    }
}
