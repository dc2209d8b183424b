//! One function per subcommand. Each returns a [`RunReport`]; parameter
//! errors propagate as `Err` and map to exit status 2.

use std::io::Write;

use jacobi_freeze::freeze::{log_phi_direct, log_products_direct};
use jacobi_freeze::limits::{
    build_hermite_limit, build_laguerre_limit, hermite_convergence, hermite_stationarity_residual,
    is_strictly_decreasing, laguerre_convergence, laguerre_stationarity_residual,
};
use jacobi_freeze::linalg::{log_det_spd, max_abs, relative_frobenius, Matrix};
use jacobi_freeze::normalization::{log_big_c_kappa, log_big_c_limit, log_selberg_constant};
use jacobi_freeze::precision::{
    build_algebraic, build_trigonometric, cross_relation_residual, invert_to_covariance,
};
use jacobi_freeze::sampler::{
    batch_statistics, default_step_scale, lag1_autocorrelation, sample_mcmc, to_trigonometric,
    write_csv, SampleBatch, SamplerConfig,
};
use jacobi_freeze::special::{log_factorial, log_gamma, log_pochhammer};
use jacobi_freeze::spectral::{
    build_discrete_op_basis, closed_form_log_det_algebraic, closed_form_log_det_trigonometric,
    closed_form_spectrum, symmetric_eigendecompose, verify_eigenvectors,
};
use jacobi_freeze::{EnsembleParams, Error, FreezePoint, Result};
use serde_json::{json, Value};

use crate::report::{Check, RunReport};

pub const STATIONARITY_TOL: f64 = 1e-10;
pub const PHI_TOL: f64 = 1e-10;
pub const PRODUCT_REL_TOL: f64 = 1e-11;
pub const LOG_DET_TOL_PER_N: f64 = 1e-9;
pub const CROSS_RELATION_TOL: f64 = 1e-10;
pub const EIGENVALUE_REL_TOL: f64 = 1e-8;
pub const EIGENVECTOR_RESIDUAL_TOL: f64 = 1e-8;
pub const EIGENVECTOR_COSINE_TOL: f64 = 1e-8;
pub const ORTHONORMALITY_TOL: f64 = 1e-9;
pub const GAUSSIAN_IDENTITY_TOL: f64 = 1e-10;
pub const BETA_ORACLE_TOL: f64 = 1e-10;
pub const LIMIT_DET_TOL: f64 = 1e-8;
pub const LAGUERRE_PRODUCT_TOL: f64 = 1e-10;
pub const LIMIT_STATIONARITY_TOL: f64 = 1e-10;
/// Relative Frobenius error of the CLT covariance, calibrated at
/// N=3, a=b=1, kappa=500, M=2e5 (measured ~0.003).
pub const CLT_FROBENIUS_THRESHOLD: f64 = 0.05;
pub const ACCEPTANCE_RANGE: (f64, f64) = (0.1, 0.6);
pub const MAX_LAG1_AUTOCORRELATION: f64 = 0.5;

pub fn matrix_json(m: &Matrix) -> Value {
    json!((0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect::<Vec<f64>>())
        .collect::<Vec<_>>())
}

fn params_json(p: &EnsembleParams) -> Value {
    json!({
        "n": p.n(),
        "a": p.a(),
        "b": p.b(),
        "kappa": p.kappa(),
        "alpha": p.alpha(),
        "beta": p.beta(),
    })
}

fn frozen_params_json(p: &EnsembleParams) -> Value {
    json!({ "n": p.n(), "a": p.a(), "b": p.b(), "alpha": p.alpha(), "beta": p.beta() })
}

fn max_abs_slice(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn cmd_zeros(n: usize, a: f64, b: f64) -> Result<RunReport> {
    let p = EnsembleParams::frozen(n, a, b)?;
    let fp = FreezePoint::new(p)?;
    let residual = fp.stationarity_residual();
    let max_res = max_abs_slice(&residual);
    let phi_direct = log_phi_direct(&fp.z, &p);
    let (dm, dp) = log_products_direct(&fp.z);
    let rel_minus = (dm - fp.log_prod_one_minus).exp_m1().abs();
    let rel_plus = (dp - fp.log_prod_one_plus).exp_m1().abs();
    let results = json!({
        "z": fp.z,
        "t": fp.t,
        "stationarity_residual": residual,
        "log_phi_closed_form": fp.log_phi,
        "log_phi_direct": phi_direct,
        "prod_one_minus_z_closed_form": fp.log_prod_one_minus.exp(),
        "prod_one_minus_z_direct": dm.exp(),
        "prod_one_plus_z_closed_form": fp.log_prod_one_plus.exp(),
        "prod_one_plus_z_direct": dp.exp(),
    });
    let checks = vec![
        Check::at_most("max_stationarity_residual", max_res, STATIONARITY_TOL),
        Check::absolute("log_phi_direct_vs_closed_form", fp.log_phi, phi_direct, PHI_TOL),
        Check::at_most("prod_one_minus_z_relative_error", rel_minus, PRODUCT_REL_TOL),
        Check::at_most("prod_one_plus_z_relative_error", rel_plus, PRODUCT_REL_TOL),
    ];
    Ok(RunReport::new("zeros", frozen_params_json(&p), results, checks, None))
}

pub fn cmd_precision(n: usize, a: f64, b: f64) -> Result<RunReport> {
    let p = EnsembleParams::frozen(n, a, b)?;
    let fp = FreezePoint::new(p)?;
    let s = build_algebraic(&fp);
    let st = build_trigonometric(&fp);
    let cross = cross_relation_residual(&s, &st)?;
    let scale = max_abs(&st.entries);
    let det_s_closed = closed_form_log_det_algebraic(&p);
    let det_s_num = log_det_spd(&s.entries)?;
    let det_st_closed = closed_form_log_det_trigonometric(&p);
    let det_st_num = log_det_spd(&st.entries)?;
    let det_ratio_expected =
        n as f64 * 4f64.ln() + fp.log_prod_one_minus + fp.log_prod_one_plus;
    let tol = LOG_DET_TOL_PER_N * n as f64;
    let results = json!({
        "S": matrix_json(&s.entries),
        "S_tilde": matrix_json(&st.entries),
        "cross_relation_residual": cross,
        "log_det_S_closed_form": det_s_closed,
        "log_det_S_numerical": det_s_num,
        "det_S_closed_form": det_s_closed.exp(),
        "log_det_S_tilde_closed_form": det_st_closed,
        "log_det_S_tilde_numerical": det_st_num,
        "det_S_tilde_closed_form": det_st_closed.exp(),
    });
    let checks = vec![
        Check::at_most("cross_relation_residual_scaled", cross / scale, CROSS_RELATION_TOL),
        Check::absolute("log_det_S", det_s_closed, det_s_num, tol),
        Check::absolute("log_det_S_tilde", det_st_closed, det_st_num, tol),
        Check::absolute(
            "log_det_ratio_vs_4N_prod_one_minus_z_sq",
            det_ratio_expected,
            det_st_num - det_s_num,
            tol,
        ),
    ];
    Ok(RunReport::new("precision", frozen_params_json(&p), results, checks, None))
}

pub fn cmd_spectrum(n: usize, a: f64, b: f64) -> Result<RunReport> {
    let p = EnsembleParams::frozen(n, a, b)?;
    let fp = FreezePoint::new(p)?;
    let st = build_trigonometric(&fp);
    let numerical = symmetric_eigendecompose(&st.entries)?;
    let closed = closed_form_spectrum(&p);
    let rel_err: Vec<f64> = numerical
        .eigenvalues
        .iter()
        .zip(&closed)
        .map(|(x, y)| ((x - y) / y).abs())
        .collect();
    let basis = build_discrete_op_basis(&fp)?;
    let gram_err = max_abs(&(basis.gram() - Matrix::identity(n, n)));
    let (checks_ev, norm) = verify_eigenvectors(&st, &basis)?;
    let worst_res = checks_ev.iter().map(|c| c.residual / norm).fold(0.0, f64::max);
    let worst_cos = checks_ev.iter().map(|c| c.cosine).fold(1.0, f64::min);
    let s_min = symmetric_eigendecompose(&build_algebraic(&fp).entries)?.eigenvalues[0];
    let results = json!({
        "eigenvalues_numerical": numerical.eigenvalues,
        "eigenvalues_closed_form": closed,
        "eigenvalue_relative_errors": rel_err,
        "eigenvector_checks": checks_ev,
        "norm_S_tilde": norm,
        "orthonormality_error": gram_err,
        "min_eigenvalue_S": s_min,
    });
    let checks = vec![
        Check::at_most("max_eigenvalue_relative_error", max_abs_slice(&rel_err), EIGENVALUE_REL_TOL),
        Check::at_most("max_eigenvector_residual_scaled", worst_res, EIGENVECTOR_RESIDUAL_TOL),
        Check::at_least("min_eigenvector_cosine", 1.0, worst_cos, 1.0 - EIGENVECTOR_COSINE_TOL),
        Check::at_most("discrete_orthonormality_error", gram_err, ORTHONORMALITY_TOL),
        Check::flag("S_positive_definite", s_min > 0.0),
    ];
    Ok(RunReport::new("spectrum", frozen_params_json(&p), results, checks, None))
}

#[derive(Debug, Clone)]
pub struct SampleOptions {
    pub n_samples: usize,
    pub seed: u64,
    pub n_chains: usize,
    pub burn_in: usize,
    pub thinning: usize,
    pub step_scale: Option<f64>,
}

fn sampler_config(p: EnsembleParams, opts: &SampleOptions) -> SamplerConfig {
    SamplerConfig {
        burn_in: opts.burn_in,
        thinning: opts.thinning,
        n_chains: opts.n_chains,
        step_scale: opts.step_scale.unwrap_or_else(|| default_step_scale(p.n())),
        ..SamplerConfig::new(p, opts.n_samples, opts.seed)
    }
}

fn sampler_options_json(config: &SamplerConfig) -> Value {
    json!({
        "n_samples": config.n_samples,
        "burn_in": config.burn_in,
        "thinning": config.thinning,
        "step_scale": config.step_scale,
        "n_chains": config.n_chains,
    })
}

fn sample_batch(p: EnsembleParams, opts: &SampleOptions) -> Result<(SamplerConfig, SampleBatch)> {
    let config = sampler_config(p, opts);
    let batch = sample_mcmc(&config)?;
    if let Some(w) = batch.acceptance_warning() {
        eprintln!("warning: {w}");
    }
    Ok((config, batch))
}

/// Samples, writes the batch as CSV to `out`, and reports summary statistics
/// of `sqrt(kappa)(X - z)`.
pub fn cmd_sample<W: Write>(
    n: usize,
    a: f64,
    b: f64,
    kappa: f64,
    opts: &SampleOptions,
    out: W,
) -> Result<RunReport> {
    let p = EnsembleParams::new(n, a, b, kappa)?;
    let (config, batch) = sample_batch(p, opts)?;
    write_csv(&batch, out).map_err(|e| Error::Config(format!("writing CSV failed: {e}")))?;
    let fp = FreezePoint::new(p)?;
    let stats = batch_statistics(&batch, &fp.z, kappa.sqrt())?;
    let lag1 = lag1_autocorrelation(&batch);
    let mut params = params_json(&p);
    params["sampler"] = sampler_options_json(&config);
    let results = json!({
        "rows": batch.len(),
        "acceptance_rate": batch.acceptance_rate,
        "chains": batch.chains.iter().map(|c| c.0).collect::<Vec<_>>(),
        "rescaled_mean": stats.mean,
        "rescaled_standard_errors": stats.standard_errors,
        "rescaled_covariance": matrix_json(&stats.covariance),
        "lag1_autocorrelation": lag1,
    });
    let mut checks = vec![Check::flag("rows_ordered_and_interior", batch.rows_in_alcove())];
    if opts.step_scale.is_none() {
        let (lo, hi) = ACCEPTANCE_RANGE;
        checks.push(Check::at_least("acceptance_rate_min", 0.3, batch.acceptance_rate, lo));
        checks.push(Check::at_most("acceptance_rate_max", batch.acceptance_rate, hi));
    }
    Ok(RunReport::new("sample", params, results, checks, Some(opts.seed)))
}

/// Full CLT pipeline in both coordinate systems.
pub fn cmd_clt(
    n: usize,
    a: f64,
    b: f64,
    kappa: f64,
    opts: &SampleOptions,
    threshold: f64,
) -> Result<RunReport> {
    let p = EnsembleParams::new(n, a, b, kappa)?;
    let (config, batch) = sample_batch(p, opts)?;
    let fp = FreezePoint::new(p)?;
    let scale = kappa.sqrt();

    let sigma = invert_to_covariance(&build_algebraic(&fp))?;
    let alg = batch_statistics(&batch, &fp.z, scale)?;
    let err_alg = relative_frobenius(&alg.covariance, &sigma);

    let trig_batch = to_trigonometric(&batch)?;
    let sigma_t = invert_to_covariance(&build_trigonometric(&fp))?;
    let trig = batch_statistics(&trig_batch, &fp.t, scale)?;
    let err_trig = relative_frobenius(&trig.covariance, &sigma_t);

    let z_scores: Vec<f64> = alg
        .mean
        .iter()
        .zip(&alg.standard_errors)
        .map(|(m, s)| m / s)
        .collect();
    let lag1 = lag1_autocorrelation(&batch);
    let mut params = params_json(&p);
    params["sampler"] = sampler_options_json(&config);
    params["threshold"] = json!(threshold);
    let results = json!({
        "rows": batch.len(),
        "acceptance_rate": batch.acceptance_rate,
        "algebraic": {
            "empirical_covariance": matrix_json(&alg.covariance),
            "limit_covariance": matrix_json(&sigma),
            "relative_frobenius_error": err_alg,
            "rescaled_mean": alg.mean,
            "rescaled_mean_z_scores": z_scores,
        },
        "trigonometric": {
            "empirical_covariance": matrix_json(&trig.covariance),
            "limit_covariance": matrix_json(&sigma_t),
            "relative_frobenius_error": err_trig,
            "rescaled_mean": trig.mean,
        },
        "lag1_autocorrelation": lag1,
    });
    let checks = vec![
        Check::at_most("algebraic_covariance_frobenius", err_alg, threshold),
        Check::at_most("trigonometric_covariance_frobenius", err_trig, threshold),
        Check::at_most("max_lag1_autocorrelation", max_abs_slice(&lag1), MAX_LAG1_AUTOCORRELATION),
        Check::flag("rows_ordered_and_interior", batch.rows_in_alcove()),
    ];
    Ok(RunReport::new("clt", params, results, checks, Some(opts.seed)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitMode {
    Hermite,
    Laguerre,
}

pub fn cmd_limits(mode: LimitMode, n: usize, beta: f64, alphas: &[f64]) -> Result<RunReport> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            constraint: "n >= 1",
            value: 0.0,
        });
    }
    let log_nfact = log_factorial(n);
    let (results, mut checks, rows, params) = match mode {
        LimitMode::Hermite => {
            let h = build_hermite_limit(n)?;
            let rows = hermite_convergence(n, alphas)?;
            let log_det = log_det_spd(&h.s_h)?;
            let stat = max_abs_slice(&hermite_stationarity_residual(&h.zeros_h));
            let results = json!({
                "zeros": h.zeros_h,
                "S_limit": matrix_json(&h.s_h),
                "log_det_S_limit": log_det,
                "det_S_limit": log_det.exp(),
                "convergence": rows,
            });
            let checks = vec![
                Check::absolute("log_det_S_H_vs_log_N_factorial", log_nfact, log_det, LIMIT_DET_TOL),
                Check::at_most("hermite_stationarity_residual", stat, LIMIT_STATIONARITY_TOL),
            ];
            (results, checks, rows, json!({ "mode": "hermite", "n": n, "alphas": alphas }))
        }
        LimitMode::Laguerre => {
            let l = build_laguerre_limit(n, beta)?;
            let rows = laguerre_convergence(n, beta, alphas)?;
            let log_det = log_det_spd(&l.s_l)?;
            let log_poch = log_pochhammer(beta + 1.0, n)?;
            let log_prod: f64 = l.zeros_l.iter().map(|z| z.ln()).sum();
            let stat = max_abs_slice(&laguerre_stationarity_residual(&l.zeros_l, beta));
            let results = json!({
                "zeros": l.zeros_l,
                "S_limit": matrix_json(&l.s_l),
                "log_det_S_limit": log_det,
                "det_S_limit": log_det.exp(),
                "convergence": rows,
            });
            let checks = vec![
                Check::absolute(
                    "log_det_S_L_vs_log_N_factorial_over_pochhammer",
                    log_nfact - log_poch,
                    log_det,
                    LIMIT_DET_TOL,
                ),
                Check::at_most(
                    "prod_zeros_vs_pochhammer_relative",
                    (log_prod - log_poch).exp_m1().abs(),
                    LAGUERRE_PRODUCT_TOL,
                ),
                Check::at_most("laguerre_stationarity_residual", stat, LIMIT_STATIONARITY_TOL),
            ];
            (
                results,
                checks,
                rows,
                json!({ "mode": "laguerre", "n": n, "beta": beta, "alphas": alphas }),
            )
        }
    };
    if alphas.len() >= 2 {
        let md: Vec<f64> = rows.iter().map(|r| r.matrix_distance).collect();
        let zd: Vec<f64> = rows.iter().map(|r| r.zero_distance).collect();
        checks.push(Check::flag("matrix_distance_strictly_decreasing", is_strictly_decreasing(&md)));
        if n > 1 || mode == LimitMode::Laguerre {
            checks.push(Check::flag("zero_distance_strictly_decreasing", is_strictly_decreasing(&zd)));
        }
    }
    let command = match mode {
        LimitMode::Hermite => "limits-hermite",
        LimitMode::Laguerre => "limits-laguerre",
    };
    Ok(RunReport::new(command, params, results, checks, None))
}

/// `log(1/c_kappa)` for N = 1 written through the Beta function:
/// `(kappa(a+2b)/2) log 2 + log B(kappa(a+b)/2 + 1/2, kappa b/2 + 1/2)`.
pub fn single_particle_log_inverse_constant(p: &EnsembleParams) -> Result<f64> {
    let k = p.kappa();
    let x = k * (p.a() + p.b()) / 2.0 + 0.5;
    let y = k * p.b() / 2.0 + 0.5;
    let log_beta = log_gamma(x)? + log_gamma(y)? - log_gamma(x + y)?;
    Ok(k * (p.a() + 2.0 * p.b()) / 2.0 * std::f64::consts::LN_2 + log_beta)
}

pub fn cmd_normalization(n: usize, a: f64, b: f64, kappas: &[f64]) -> Result<RunReport> {
    let base = EnsembleParams::frozen(n, a, b)?;
    let fp = FreezePoint::new(base)?;
    let limit = log_big_c_limit(&base);
    let mut table = Vec::with_capacity(kappas.len());
    let mut gaps = Vec::with_capacity(kappas.len());
    let mut checks = Vec::new();
    for &k in kappas {
        let p = base.with_kappa(k)?;
        let log_c = log_selberg_constant(&p);
        let log_big = log_big_c_kappa(&p, &fp);
        let gap = (log_big - limit).abs();
        gaps.push(gap);
        table.push(json!({
            "kappa": k,
            "log_c_kappa": log_c,
            "log_C_kappa": log_big,
            "abs_gap_to_limit": gap,
        }));
        if n == 1 {
            let oracle = single_particle_log_inverse_constant(&p)?;
            checks.push(Check::at_most(
                format!("beta_form_inverse_constant_relative_kappa_{k}"),
                (oracle + log_c).exp_m1().abs(),
                BETA_ORACLE_TOL,
            ));
        }
    }
    let gaussian = 0.5 * closed_form_log_det_algebraic(&base)
        - 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln();
    checks.push(Check::at_most(
        "gaussian_normalizer_identity_relative",
        (limit - gaussian).exp_m1().abs(),
        GAUSSIAN_IDENTITY_TOL,
    ));
    if kappas.len() >= 2 {
        checks.push(Check::flag("gap_strictly_decreasing", is_strictly_decreasing(&gaps)));
    }
    let results = json!({
        "table": table,
        "log_C_limit": limit,
        "C_limit": limit.exp(),
        "sqrt_det_S_over_2pi_pow_half_n": gaussian.exp(),
    });
    Ok(RunReport::new(
        "normalization",
        json!({ "n": n, "a": a, "b": b, "kappas": kappas }),
        results,
        checks,
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_report() {
        let r = cmd_zeros(2, 0.0, 1.0).unwrap();
        assert!(r.all_pass);
        let z = r.results["z"].as_array().unwrap();
        assert!((z[1].as_f64().unwrap() - 0.577_350_269_2).abs() < 1e-10);
    }

    #[test]
    fn invalid_b_is_error() {
        let err = cmd_zeros(2, 0.0, 0.0).unwrap_err();
        assert!(err.to_string().contains("b > 0"));
    }

    #[test]
    fn precision_spot_values() {
        let r = cmd_precision(2, 0.0, 1.0).unwrap();
        assert!(r.all_pass);
        assert!((r.results["det_S_closed_form"].as_f64().unwrap() - 13.5).abs() < 1e-12);
        assert!((r.results["det_S_tilde_closed_form"].as_f64().unwrap() - 96.0).abs() < 1e-11);
    }

    #[test]
    fn spectrum_spot_values() {
        let r = cmd_spectrum(2, 0.0, 1.0).unwrap();
        assert!(r.all_pass);
        let ev = r.results["eigenvalues_numerical"].as_array().unwrap();
        assert!((ev[0].as_f64().unwrap() - 8.0).abs() < 1e-12);
        assert!((ev[1].as_f64().unwrap() - 12.0).abs() < 1e-12);
        let r = cmd_spectrum(1, 1.0, 1.0).unwrap();
        assert!((r.results["eigenvalues_numerical"][0].as_f64().unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn limits_spot_values() {
        let r = cmd_limits(LimitMode::Hermite, 2, 0.0, &[1e2, 1e3, 1e4]).unwrap();
        assert!(r.all_pass);
        assert!((r.results["det_S_limit"].as_f64().unwrap() - 2.0).abs() < 1e-12);
        let r = cmd_limits(LimitMode::Laguerre, 2, 0.0, &[1e2, 1e3, 1e4]).unwrap();
        assert!(r.all_pass);
        assert!((r.results["det_S_limit"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalization_single_particle() {
        let r = cmd_normalization(1, 1.0, 1.0, &[1e2, 1e3, 1e4]).unwrap();
        assert!(r.all_pass, "{:#?}", r.checks);
    }
}
