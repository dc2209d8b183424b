//! The `verify-all` acceptance grid. Each criterion collapses to one check
//! carrying its worst case over the grid.

use nalgebra::{DMatrix, SymmetricEigen};
use serde_json::{json, Value};

use jacobi_freeze::limits::is_strictly_decreasing;
use jacobi_freeze::normalization::log_selberg_constant;
use jacobi_freeze::{EnsembleParams, Result};

use crate::commands::*;
use crate::report::{Check, CheckKind, RunReport};

pub const GRID_N: [usize; 8] = [1, 2, 3, 5, 8, 16, 32, 64];
pub const GRID_AB: [(f64, f64); 4] = [(0.0, 1.0), (1.0, 1.0), (2.0, 0.5), (0.5, 3.0)];
pub const QUADRATURE_TOL: f64 = 1e-6;

/// Gauss-Legendre nodes and weights on `[lo, hi]`.
pub fn gauss_legendre(m: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut j = DMatrix::<f64>::zeros(m, m);
    for k in 1..m {
        let kf = k as f64;
        let v = kf / (4.0 * kf * kf - 1.0).sqrt();
        j[(k - 1, k)] = v;
        j[(k, k - 1)] = v;
    }
    let eig = SymmetricEigen::new(j);
    let half = 0.5 * (hi - lo);
    let mut rule: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = 2.0 * eig.eigenvectors[(0, i)].powi(2);
            (lo + half * (x + 1.0), half * w)
        })
        .collect();
    rule.sort_by(|p, q| p.0.total_cmp(&q.0));
    rule
}

/// `1/c_kappa` for N = 2 by tensor quadrature in `x = cos(2 phi)`, which
/// turns the endpoint weights into `sin^{2p} phi cos^{2q} phi`.
pub fn two_particle_inverse_constant(p: &EnsembleParams, nodes: usize) -> f64 {
    let k = p.kappa();
    let pe = k * (p.a() + p.b()) / 2.0;
    let qe = k * p.b() / 2.0;
    let rule = gauss_legendre(nodes, 0.0, std::f64::consts::FRAC_PI_2);
    let one: Vec<(f64, f64)> = rule
        .iter()
        .map(|&(phi, w)| {
            let (s, c) = phi.sin_cos();
            let weight = 2f64.powf(pe + qe + 1.0) * s.powf(2.0 * pe) * c.powf(2.0 * qe);
            ((2.0 * phi).cos(), w * weight)
        })
        .collect();
    let mut total = 0.0;
    for &(x1, w1) in &one {
        for &(x2, w2) in &one {
            total += w1 * w2 * (x2 - x1).abs().powf(k);
        }
    }
    0.5 * total
}

fn worst(reports: &[RunReport], name: &str) -> (f64, bool) {
    let mut max_dev = 0.0_f64;
    let mut pass = true;
    for r in reports {
        for c in r.checks.iter().filter(|c| c.name == name) {
            let dev = match c.kind {
                CheckKind::Absolute => (c.actual - c.expected).abs(),
                CheckKind::AtLeast => c.expected - c.actual,
                _ => c.actual,
            };
            max_dev = max_dev.max(dev);
            pass &= c.pass;
        }
    }
    (max_dev, pass)
}

fn criterion(name: &str, reports: &[RunReport], parts: &[(&str, f64)]) -> Vec<Check> {
    parts
        .iter()
        .map(|&(check, tol)| {
            let (dev, pass) = worst(reports, check);
            let mut c = Check::at_most(format!("{name}/{check}"), dev, tol);
            c.pass = pass && !dev.is_nan();
            c
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    pub lln_samples: usize,
    pub clt_samples: usize,
    pub clt_chains: usize,
}

impl VerifyOptions {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            lln_samples: 50_000,
            clt_samples: 200_000,
            clt_chains: 4,
        }
    }
}

fn sample_opts(n_samples: usize, seed: u64, n_chains: usize) -> SampleOptions {
    SampleOptions {
        n_samples,
        seed,
        n_chains,
        burn_in: jacobi_freeze::sampler::DEFAULT_BURN_IN,
        thinning: jacobi_freeze::sampler::DEFAULT_THINNING,
        step_scale: None,
    }
}

pub fn verify_all(opts: &VerifyOptions) -> Result<RunReport> {
    let mut checks = Vec::new();
    let mut results = serde_json::Map::new();

    let mut zeros = Vec::new();
    let mut precision = Vec::new();
    let mut spectrum = Vec::new();
    for &n in &GRID_N {
        for &(a, b) in &GRID_AB {
            zeros.push(cmd_zeros(n, a, b)?);
            precision.push(cmd_precision(n, a, b)?);
            spectrum.push(cmd_spectrum(n, a, b)?);
        }
    }
    let log_det_tol = LOG_DET_TOL_PER_N * *GRID_N.last().unwrap() as f64;
    checks.extend(criterion("c01_stationarity", &zeros, &[("max_stationarity_residual", STATIONARITY_TOL)]));
    checks.extend(criterion("c02_discriminant", &zeros, &[("log_phi_direct_vs_closed_form", PHI_TOL)]));
    checks.extend(criterion(
        "c03_products",
        &zeros,
        &[
            ("prod_one_minus_z_relative_error", PRODUCT_REL_TOL),
            ("prod_one_plus_z_relative_error", PRODUCT_REL_TOL),
        ],
    ));
    checks.extend(criterion("c04_det_S", &precision, &[("log_det_S", log_det_tol)]));
    let spot = cmd_precision(2, 0.0, 1.0)?;
    checks.push(Check::relative(
        "c04_det_S/spot_n2_alpha0_beta0",
        13.5,
        spot.results["det_S_closed_form"].as_f64().unwrap_or(f64::NAN),
        1e-12,
    ));
    checks.extend(criterion("c05_spectrum", &spectrum, &[("max_eigenvalue_relative_error", EIGENVALUE_REL_TOL)]));
    for (label, n, a, b, expected) in [
        ("c05_spectrum/spot_n1", 1, 1.0, 1.0, vec![6.0]),
        ("c05_spectrum/spot_n2", 2, 0.0, 1.0, vec![8.0, 12.0]),
    ] {
        let r = cmd_spectrum(n, a, b)?;
        let got: Vec<f64> = serde_json::from_value(r.results["eigenvalues_numerical"].clone()).unwrap_or_default();
        let dev = got.iter().zip(&expected).map(|(g, e)| ((g - e) / e).abs()).fold(0.0, f64::max);
        let complete = got.len() == expected.len();
        checks.push(Check::at_most(label, if complete { dev } else { f64::NAN }, EIGENVALUE_REL_TOL));
    }
    checks.extend(criterion(
        "c06_eigenvectors",
        &spectrum,
        &[
            ("max_eigenvector_residual_scaled", EIGENVECTOR_RESIDUAL_TOL),
            ("min_eigenvector_cosine", EIGENVECTOR_COSINE_TOL),
        ],
    ));
    checks.extend(criterion(
        "c07_cross_relation",
        &precision,
        &[
            ("cross_relation_residual_scaled", CROSS_RELATION_TOL),
            ("log_det_S_tilde", log_det_tol),
        ],
    ));
    results.insert("grid_points".into(), json!(zeros.len()));

    // Selberg normalization
    let kappas = [1e2, 1e3, 1e4];
    let mut norm = Vec::new();
    for &(a, b) in &GRID_AB {
        for n in [1, 2, 3, 8] {
            norm.push(cmd_normalization(n, a, b, &kappas)?);
        }
    }
    let beta_oracle: Vec<RunReport> = GRID_AB
        .iter()
        .map(|&(a, b)| cmd_normalization(1, a, b, &[0.5, 1.0, 2.0, 7.0, 40.0]))
        .collect::<Result<_>>()?;
    let beta_dev = beta_oracle
        .iter()
        .flat_map(|r| r.checks.iter())
        .filter(|c| c.name.starts_with("beta_form"))
        .map(|c| c.actual)
        .fold(0.0, f64::max);
    checks.push(Check::at_most("c08_selberg/beta_oracle_n1", beta_dev, BETA_ORACLE_TOL));
    let mut quad_dev = 0.0_f64;
    for kappa in [2.0, 4.0] {
        for (a, b) in [(1.0, 1.0), (0.0, 1.0), (2.0, 0.5)] {
            let p = EnsembleParams::new(2, a, b, kappa)?;
            let oracle = two_particle_inverse_constant(&p, 96);
            let closed = (-log_selberg_constant(&p)).exp();
            quad_dev = quad_dev.max(((closed - oracle) / oracle).abs());
        }
    }
    checks.push(Check::at_most("c08_selberg/quadrature_oracle_n2", quad_dev, QUADRATURE_TOL));
    let monotone = norm.iter().all(|r| r.checks.iter().filter(|c| c.name == "gap_strictly_decreasing").all(|c| c.pass));
    checks.push(Check::flag("c08_selberg/gap_to_limit_decreasing", monotone));
    checks.extend(criterion("c08_selberg", &norm, &[("gaussian_normalizer_identity_relative", GAUSSIAN_IDENTITY_TOL)]));

    // LLN
    let mut lln = Vec::new();
    for kappa in [10.0, 100.0, 1000.0] {
        let r = cmd_sample(3, 1.0, 1.0, kappa, &sample_opts(opts.lln_samples, opts.seed, 1), std::io::sink())?;
        let mean: Vec<f64> = serde_json::from_value(r.results["rescaled_mean"].clone()).unwrap_or_default();
        let dist = mean.iter().map(|m| m * m).sum::<f64>().sqrt() / kappa.sqrt();
        lln.push(dist);
    }
    results.insert("lln_mean_distances".into(), json!(lln));
    checks.push(Check::flag("c09_lln/mean_distance_decreasing", is_strictly_decreasing(&lln)));

    // CLT
    let clt_opts = sample_opts(opts.clt_samples, opts.seed, opts.clt_chains);
    let clt = cmd_clt(3, 1.0, 1.0, 500.0, &clt_opts, CLT_FROBENIUS_THRESHOLD)?;
    let frob = |frame: &str| {
        clt.results[frame]["relative_frobenius_error"]
            .as_f64()
            .unwrap_or(f64::NAN)
    };
    checks.push(Check::at_most("c10_clt/algebraic_frobenius", frob("algebraic"), CLT_FROBENIUS_THRESHOLD));
    checks.push(Check::at_most("c10_clt/trigonometric_frobenius", frob("trigonometric"), CLT_FROBENIUS_THRESHOLD));
    results.insert(
        "clt_mean_z_scores".into(),
        clt.results["algebraic"]["rescaled_mean_z_scores"].clone(),
    );

    // Hermite and Laguerre degenerations
    let alphas = [1e2, 1e3, 1e4];
    let mut hermite = Vec::new();
    for n in 1..=20 {
        let sweep: &[f64] = if [2, 3, 5].contains(&n) { &alphas } else { &[] };
        hermite.push(cmd_limits(LimitMode::Hermite, n, 0.0, sweep)?);
    }
    checks.extend(criterion(
        "c11_hermite",
        &hermite,
        &[("log_det_S_H_vs_log_N_factorial", LIMIT_DET_TOL), ("hermite_stationarity_residual", LIMIT_STATIONARITY_TOL)],
    ));
    checks.push(all_flags("c11_hermite/matrix_distance_decreasing", &hermite, "matrix_distance_strictly_decreasing"));
    let mut laguerre = Vec::new();
    for beta in [0.0, 0.5, 2.0] {
        for n in 1..=20 {
            let sweep: &[f64] = if [2, 3, 5].contains(&n) { &alphas } else { &[] };
            laguerre.push(cmd_limits(LimitMode::Laguerre, n, beta, sweep)?);
        }
    }
    checks.extend(criterion(
        "c12_laguerre",
        &laguerre,
        &[
            ("log_det_S_L_vs_log_N_factorial_over_pochhammer", LIMIT_DET_TOL),
            ("prod_zeros_vs_pochhammer_relative", LAGUERRE_PRODUCT_TOL),
            ("laguerre_stationarity_residual", LIMIT_STATIONARITY_TOL),
        ],
    ));
    checks.push(all_flags("c12_laguerre/matrix_distance_decreasing", &laguerre, "matrix_distance_strictly_decreasing"));

    // Determinism
    let small = sample_opts(2_000, opts.seed, 2);
    let run_sample = || -> Result<(Vec<u8>, String)> {
        let mut csv = Vec::new();
        let r = cmd_sample(3, 1.0, 1.0, 100.0, &small, &mut csv)?;
        Ok((csv, payload(&r)))
    };
    let first = run_sample()?;
    let second = run_sample()?;
    let clt_again = cmd_clt(3, 1.0, 1.0, 500.0, &clt_opts, CLT_FROBENIUS_THRESHOLD)?;
    checks.push(Check::flag("c13_determinism/sample_csv_and_report", first == second));
    checks.push(Check::flag("c13_determinism/clt_report", payload(&clt) == payload(&clt_again)));

    Ok(RunReport::new(
        "verify-all",
        json!({
            "seed": opts.seed,
            "grid_n": GRID_N,
            "grid_ab": GRID_AB,
            "lln_samples": opts.lln_samples,
            "clt_samples": opts.clt_samples,
            "clt_chains": opts.clt_chains,
        }),
        Value::Object(results),
        checks,
        Some(opts.seed),
    ))
}

fn all_flags(label: &str, reports: &[RunReport], name: &str) -> Check {
    let holds = reports
        .iter()
        .flat_map(|r| r.checks.iter())
        .filter(|c| c.name == name)
        .all(|c| c.pass);
    Check::flag(label, holds)
}

/// Canonical JSON of a report without its timestamp.
pub fn payload(r: &RunReport) -> String {
    let mut v = serde_json::to_value(r).unwrap_or(Value::Null);
    if let Value::Object(m) = &mut v {
        m.remove("timestamp");
    }
    v.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = gauss_legendre(5, -1.0, 1.0);
        let s: f64 = rule.iter().map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn two_particle_quadrature() {
        let p = EnsembleParams::new(2, 1.0, 1.0, 2.0).unwrap();
        let closed = (-log_selberg_constant(&p)).exp();
        let quad = two_particle_inverse_constant(&p, 64);
        assert!(((closed - quad) / quad).abs() < 1e-10, "{closed} {quad}");
    }
}
