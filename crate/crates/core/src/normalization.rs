//! Selberg normalization constants and their freezing asymptotics.
//!
//! By the Selberg integral,
//!
//! ```text
//! 1/c_kappa = 2^{(kappa N/2)(N+alpha+beta+1)} / N!
//!             * prod_j Γ(1 + j kappa/2) / Γ(1 + kappa/2)
//!                      * Γ(kappa(beta+j)/2 + 1/2) Γ(kappa(alpha+j)/2 + 1/2) / Γ(kappa(N+alpha+beta+j)/2 + 1)
//! ```
//!
//! The constant in front of the rescaled density of `sqrt(kappa)(X - z)` is
//! `C_kappa = c_kappa kappa^{-N/2} prod (1 - z_j^2)^{-1/2} phi(z)^kappa`, which
//! tends to `sqrt(det S) / (2 pi)^{N/2}`.

use serde::Serialize;

use crate::freeze::FreezePoint;
use crate::params::EnsembleParams;
use crate::special::{log_factorial, log_gamma, log_pochhammer};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormalizationReport {
    pub log_c_kappa: f64,
    #[serde(rename = "log_C_kappa")]
    pub log_big_c_kappa: f64,
    #[serde(rename = "log_C_limit")]
    pub log_big_c_limit: f64,
}

impl NormalizationReport {
    pub fn new(freeze: &FreezePoint) -> Self {
        let params = &freeze.params;
        Self {
            log_c_kappa: log_selberg_constant(params),
            log_big_c_kappa: log_big_c_kappa(params, freeze),
            log_big_c_limit: log_big_c_limit(params),
        }
    }
}

fn lg(x: f64) -> f64 {
    log_gamma(x).expect("Selberg gamma arguments are positive")
}

/// `log c_kappa`, the log of the density normalization on the alcove.
pub fn log_selberg_constant(params: &EnsembleParams) -> f64 {
    let n = params.n();
    let nf = n as f64;
    let k = params.kappa();
    let (alpha, beta) = (params.alpha(), params.beta());
    let half = k / 2.0;
    let mut log_inv = half * nf * (nf + alpha + beta + 1.0) * std::f64::consts::LN_2 - log_factorial(n);
    let base = lg(1.0 + half);
    for j in 1..=n {
        let jf = j as f64;
        log_inv += lg(1.0 + jf * half) - base;
        log_inv += lg(half * (beta + jf) + 0.5) + lg(half * (alpha + jf) + 0.5);
        log_inv -= lg(half * (nf + alpha + beta + jf) + 1.0);
    }
    -log_inv
}

/// `log C_kappa` assembled from `log c_kappa` and the freeze-point scalars.
pub fn log_big_c_kappa(params: &EnsembleParams, freeze: &FreezePoint) -> f64 {
    let nf = params.n() as f64;
    let k = params.kappa();
    log_selberg_constant(params) - 0.5 * nf * k.ln()
        - 0.5 * (freeze.log_prod_one_minus + freeze.log_prod_one_plus)
        + k * freeze.log_phi
}

/// `log lim C_kappa = log [ sqrt(N!) / (2^{2N} pi^{N/2}) * ((N+alpha+beta+1)_N)^{3/2} / sqrt((alpha+1)_N (beta+1)_N) ]`.
pub fn log_big_c_limit(params: &EnsembleParams) -> f64 {
    let n = params.n();
    let nf = n as f64;
    let (alpha, beta) = (params.alpha(), params.beta());
    let poch = |x: f64| log_pochhammer(x, n).expect("positive Pochhammer base");
    0.5 * log_factorial(n) - 2.0 * nf * std::f64::consts::LN_2 - 0.5 * nf * std::f64::consts::PI.ln()
        + 1.5 * poch(nf + alpha + beta + 1.0)
        - 0.5 * (poch(alpha + 1.0) + poch(beta + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn single_particle_beta_form() {
        // kappa = 2, a = b = 1: 1/c = 2^3 * B(5/2, 3/2) = 8 * pi/16 = pi/2
        let p = EnsembleParams::new(1, 1.0, 1.0, 2.0).unwrap();
        assert_relative_eq!((-log_selberg_constant(&p)).exp(), PI / 2.0, max_relative = 1e-13);
    }

    #[test]
    fn limit_single_particle() {
        let p = EnsembleParams::frozen(1, 1.0, 1.0).unwrap();
        let expected = 3.0 * 3f64.sqrt() / (4.0 * (2.0 * PI).sqrt());
        assert_relative_eq!(log_big_c_limit(&p).exp(), expected, max_relative = 1e-14);
    }

    #[test]
    fn finite_at_kappa_one() {
        let p = EnsembleParams::new(4, 0.5, 3.0, 1.0).unwrap();
        let fp = FreezePoint::new(p).unwrap();
        let r = NormalizationReport::new(&fp);
        assert!(r.log_c_kappa.is_finite());
        assert!(r.log_big_c_kappa.is_finite());
        assert!(r.log_big_c_limit.is_finite());
    }

    #[test]
    fn large_kappa_stays_finite() {
        let p = EnsembleParams::new(8, 1.0, 1.0, 100.0).unwrap();
        assert!(log_selberg_constant(&p).is_finite());
    }
}
