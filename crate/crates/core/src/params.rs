//! Ensemble parameters.
//!
//! An ensemble is fixed by the dimension `n`, the shape pair `(a, b)` and the
//! freezing parameter `kappa`. The multiplicities are `k = kappa * (a, b, 1)`,
//! and the Jacobi indices of the freezing point are `alpha = a + b - 1`,
//! `beta = b - 1`. Both indices are derived and never stored independently.

use serde::Serialize;

use crate::error::{Error, Result};

/// Parameters `(N, a, b, kappa)` of one beta-Jacobi ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleParams {
    n: usize,
    a: f64,
    b: f64,
    kappa: f64,
}

impl EnsembleParams {
    /// Validates and builds a parameter set.
    pub fn new(n: usize, a: f64, b: f64, kappa: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter {
                name: "n",
                constraint: "n >= 1",
                value: n as f64,
            });
        }
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "a",
                constraint: "a >= 0",
                value: a,
            });
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter {
                name: "b",
                constraint: "b > 0",
                value: b,
            });
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                constraint: "kappa > 0",
                value: kappa,
            });
        }
        Ok(Self { n, a, b, kappa })
    }

    /// Parameters for the frozen limit, where only `(N, a, b)` matter.
    /// `kappa` is set to 1.
    pub fn frozen(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(n, a, b, 1.0)
    }

    /// Builds parameters from Jacobi indices `(alpha, beta)` by inverting
    /// `a = alpha - beta`, `b = beta + 1`. Requires `alpha >= beta > -1`.
    pub fn from_jacobi(n: usize, alpha: f64, beta: f64, kappa: f64) -> Result<Self> {
        Self::new(n, alpha - beta, beta + 1.0, kappa)
    }

    /// Same ensemble at a different freezing parameter.
    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::new(self.n, self.a, self.b, kappa)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn alpha(&self) -> f64 {
        self.a + self.b - 1.0
    }

    pub fn beta(&self) -> f64 {
        self.b - 1.0
    }

    /// Multiplicities `(k1, k2, k3) = kappa * (a, b, 1)`.
    pub fn multiplicities(&self) -> [f64; 3] {
        [self.kappa * self.a, self.kappa * self.b, self.kappa]
    }

    /// Exponent of `(1 - x_i)` in the ensemble density.
    pub fn upper_wall_exponent(&self) -> f64 {
        self.kappa * (self.a + self.b) / 2.0 - 0.5
    }

    /// Exponent of `(1 + x_i)` in the ensemble density.
    pub fn lower_wall_exponent(&self) -> f64 {
        self.kappa * self.b / 2.0 - 0.5
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_indices() {
        let p = EnsembleParams::new(3, 2.0, 0.5, 4.0).unwrap();
        assert_eq!(p.alpha(), 1.5);
        assert_eq!(p.beta(), -0.5);
        assert_eq!(p.multiplicities(), [8.0, 2.0, 4.0]);
    }

    #[test]
    fn a_zero_is_allowed() {
        let p = EnsembleParams::frozen(2, 0.0, 1.0).unwrap();
        assert_eq!(p.alpha(), p.beta());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            EnsembleParams::new(0, 1.0, 1.0, 1.0),
            Err(Error::InvalidParameter { name: "n", .. })
        ));
        assert!(matches!(
            EnsembleParams::new(2, -0.1, 1.0, 1.0),
            Err(Error::InvalidParameter { name: "a", .. })
        ));
        assert!(matches!(
            EnsembleParams::new(2, 1.0, 0.0, 1.0),
            Err(Error::InvalidParameter { name: "b", .. })
        ));
        assert!(matches!(
            EnsembleParams::new(2, 1.0, 1.0, 0.0),
            Err(Error::InvalidParameter { name: "kappa", .. })
        ));
        assert!(EnsembleParams::new(2, f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn jacobi_round_trip() {
        let p = EnsembleParams::from_jacobi(4, 2.5, 0.5, 1.0).unwrap();
        assert!((p.alpha() - 2.5).abs() < 1e-15);
        assert!((p.beta() - 0.5).abs() < 1e-15);
    }
}
