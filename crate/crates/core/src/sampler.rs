//! Random-walk Metropolis sampling of the beta-Jacobi eigenvalue density
//!
//! ```text
//! prod_{i<j} (x_j - x_i)^kappa prod_i (1 - x_i)^{kappa(a+b)/2 - 1/2} (1 + x_i)^{kappa b/2 - 1/2}
//! ```
//!
//! on the open ordered alcove `-1 < x_1 < ... < x_N < 1`.
//!
//! Proposals are Gaussian with covariance `(step_scale^2 / kappa) S^{-1}`,
//! i.e. shaped like the limiting CLT covariance. Chains start at the freeze
//! point. Each chain draws from its own ChaCha stream of the master seed, so
//! results do not depend on thread scheduling.

use std::io::{self, BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freeze::FreezePoint;
use crate::linalg::{cholesky, Matrix};
use crate::params::EnsembleParams;
use crate::precision::{build_algebraic, invert_to_covariance, Coordinates};

pub const DEFAULT_BURN_IN: usize = 1_000;
pub const DEFAULT_THINNING: usize = 10;

/// Acceptance rates outside this band are reported as degenerate.
pub const ACCEPTANCE_BAND: (f64, f64) = (0.01, 0.99);

#[derive(Debug, Clone, Serialize)]
pub struct SamplerConfig {
    pub params: EnsembleParams,
    /// Retained rows `M`, summed over chains.
    pub n_samples: usize,
    pub burn_in: usize,
    pub thinning: usize,
    /// Proposal scale `c`; the proposal covariance is `(c^2 / kappa) S^{-1}`.
    pub step_scale: f64,
    pub seed: u64,
    pub n_chains: usize,
}

impl SamplerConfig {
    /// Defaults: burn-in 1000, thinning 10, one chain, `c = 2.4 / sqrt(N)`.
    pub fn new(params: EnsembleParams, n_samples: usize, seed: u64) -> Self {
        Self {
            params,
            n_samples,
            burn_in: DEFAULT_BURN_IN,
            thinning: DEFAULT_THINNING,
            step_scale: default_step_scale(params.n()),
            seed,
            n_chains: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_scale.is_finite() && self.step_scale > 0.0) {
            return Err(Error::Config(format!(
                "step_scale must be > 0 (got {})",
                self.step_scale
            )));
        }
        if self.n_samples < 1 {
            return Err(Error::Config("n_samples must be >= 1".into()));
        }
        if self.thinning < 1 {
            return Err(Error::Config("thinning must be >= 1".into()));
        }
        if self.n_chains < 1 {
            return Err(Error::Config("n_chains must be >= 1".into()));
        }
        Ok(())
    }

    fn rows_for_chain(&self, chain: usize) -> usize {
        let base = self.n_samples / self.n_chains;
        base + usize::from(chain < self.n_samples % self.n_chains)
    }
}

pub fn default_step_scale(n: usize) -> f64 {
    2.4 / (n as f64).sqrt()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChainInfo {
    pub chain_id: usize,
    pub rows: usize,
    pub acceptance_rate: f64,
}

/// Retained samples, row-major, one ordered alcove point per row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    pub coords: Coordinates,
    pub params: EnsembleParams,
    pub n: usize,
    pub data: Vec<f64>,
    pub acceptance_rate: f64,
    pub seed: u64,
    pub chains: Vec<ChainInfoEq>,
}

/// [`ChainInfo`] with bitwise equality, so batches compare exactly.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChainInfoEq(pub ChainInfo);

impl PartialEq for ChainInfoEq {
    fn eq(&self, other: &Self) -> bool {
        self.0.chain_id == other.0.chain_id
            && self.0.rows == other.0.rows
            && self.0.acceptance_rate.to_bits() == other.0.acceptance_rate.to_bits()
    }
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n)
    }

    /// Message when the acceptance rate suggests a mis-tuned proposal.
    pub fn acceptance_warning(&self) -> Option<String> {
        let (lo, hi) = ACCEPTANCE_BAND;
        (self.acceptance_rate < lo || self.acceptance_rate > hi).then(|| {
            format!(
                "degenerate acceptance rate {:.4} (outside [{lo}, {hi}]); adjust step_scale",
                self.acceptance_rate
            )
        })
    }

    /// True if every row is strictly inside its alcove and correctly ordered.
    pub fn rows_in_alcove(&self) -> bool {
        self.rows().all(|r| match self.coords {
            Coordinates::Algebraic => in_algebraic_alcove(r),
            Coordinates::Trigonometric => in_trigonometric_alcove(r),
        })
    }
}

pub fn in_algebraic_alcove(x: &[f64]) -> bool {
    x.first().is_some_and(|&v| v > -1.0)
        && x.last().is_some_and(|&v| v < 1.0)
        && x.windows(2).all(|w| w[0] < w[1])
}

pub fn in_trigonometric_alcove(t: &[f64]) -> bool {
    t.first().is_some_and(|&v| v < std::f64::consts::FRAC_PI_2)
        && t.last().is_some_and(|&v| v > 0.0)
        && t.windows(2).all(|w| w[0] > w[1])
}

/// Log of the unnormalized ensemble density, or `None` outside the open
/// alcove.
pub fn log_density(x: &[f64], params: &EnsembleParams) -> Option<f64> {
    if !in_algebraic_alcove(x) {
        return None;
    }
    let kappa = params.kappa();
    let upper = params.upper_wall_exponent();
    let lower = params.lower_wall_exponent();
    let mut acc = 0.0;
    for (j, &xj) in x.iter().enumerate() {
        for &xi in &x[..j] {
            acc += kappa * (xj - xi).ln();
        }
        acc += upper * (-xj).ln_1p() + lower * xj.ln_1p();
    }
    Some(acc)
}

struct ChainOutput {
    rows: Vec<f64>,
    accepted: u64,
    proposed: u64,
}

fn run_chain(
    config: &SamplerConfig,
    chain_id: usize,
    start: &[f64],
    proposal_factor: &Matrix,
) -> ChainOutput {
    let n = start.len();
    let params = &config.params;
    let wanted = config.rows_for_chain(chain_id);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(chain_id as u64);

    let mut current = start.to_vec();
    let mut current_ld = log_density(&current, params).expect("start point lies in the alcove");
    let mut proposal = vec![0.0; n];
    let mut noise = vec![0.0; n];
    let mut out = Vec::with_capacity(wanted * n);
    let (mut accepted, mut proposed) = (0u64, 0u64);

    let total_steps = config.burn_in + wanted * config.thinning;
    for step in 0..total_steps {
        for v in noise.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        for i in 0..n {
            let mut d = 0.0;
            for k in 0..=i {
                d += proposal_factor[(i, k)] * noise[k];
            }
            proposal[i] = current[i] + d;
        }
        // The uniform is drawn unconditionally so the stream stays aligned.
        let u: f64 = rng.random();
        let post_burn_in = step >= config.burn_in;
        if post_burn_in {
            proposed += 1;
        }
        if let Some(ld) = log_density(&proposal, params) {
            if u.ln() < ld - current_ld {
                current.copy_from_slice(&proposal);
                current_ld = ld;
                if post_burn_in {
                    accepted += 1;
                }
            }
        }
        if post_burn_in && (step - config.burn_in + 1).is_multiple_of(config.thinning) {
            out.extend_from_slice(&current);
        }
    }
    ChainOutput {
        rows: out,
        accepted,
        proposed,
    }
}

/// Runs `n_chains` independent Metropolis chains and concatenates their
/// retained rows in chain order.
pub fn sample_mcmc(config: &SamplerConfig) -> Result<SampleBatch> {
    config.validate()?;
    let params = config.params;
    let freeze = FreezePoint::new(params)?;
    let sigma = invert_to_covariance(&build_algebraic(&freeze))?;
    let scale = config.step_scale / params.kappa().sqrt();
    let factor = cholesky(&sigma)?.l() * scale;

    let outputs: Vec<ChainOutput> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..config.n_chains)
            .map(|c| {
                let (z, f) = (&freeze.z, &factor);
                scope.spawn(move || run_chain(config, c, z, f))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampler thread panicked"))
            .collect()
    });

    let mut data = Vec::with_capacity(config.n_samples * params.n());
    let mut chains = Vec::with_capacity(outputs.len());
    let (mut accepted, mut proposed) = (0u64, 0u64);
    for (chain_id, out) in outputs.into_iter().enumerate() {
        accepted += out.accepted;
        proposed += out.proposed;
        chains.push(ChainInfoEq(ChainInfo {
            chain_id,
            rows: out.rows.len() / params.n(),
            acceptance_rate: out.accepted as f64 / out.proposed.max(1) as f64,
        }));
        data.extend(out.rows);
    }
    Ok(SampleBatch {
        coords: Coordinates::Algebraic,
        params,
        n: params.n(),
        data,
        acceptance_rate: accepted as f64 / proposed.max(1) as f64,
        seed: config.seed,
        chains,
    })
}

/// Maps an algebraic batch to trigonometric coordinates `t_j = arccos(x_j)/2`.
/// Ascending `x` becomes descending `t`, so column `j` still pairs with `z_j`.
pub fn to_trigonometric(batch: &SampleBatch) -> Result<SampleBatch> {
    if batch.coords != Coordinates::Algebraic {
        return Err(Error::Config("batch is already in trigonometric coordinates".into()));
    }
    Ok(SampleBatch {
        coords: Coordinates::Trigonometric,
        data: batch.data.iter().map(|&x| 0.5 * x.acos()).collect(),
        ..batch.clone()
    })
}

/// `T(t) = (cos 2t_1, ..., cos 2t_N)`.
pub fn to_algebraic_point(t: &[f64]) -> Vec<f64> {
    t.iter().map(|&v| (2.0 * v).cos()).collect()
}

#[derive(Debug, Clone)]
pub struct BatchStatistics {
    pub mean: Vec<f64>,
    pub covariance: Matrix,
    pub standard_errors: Vec<f64>,
}

/// Mean and sample covariance (denominator `M - 1`) of
/// `scale * (row - center)`.
pub fn batch_statistics(batch: &SampleBatch, center: &[f64], scale: f64) -> Result<BatchStatistics> {
    let n = batch.n;
    if center.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: center.len(),
        });
    }
    if scale.is_nan() || scale <= 0.0 {
        return Err(Error::Config(format!("scale must be > 0 (got {scale})")));
    }
    let m = batch.len();
    if m < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: m });
    }
    let mut mean = vec![0.0; n];
    for row in batch.rows() {
        for j in 0..n {
            mean[j] += scale * (row[j] - center[j]);
        }
    }
    mean.iter_mut().for_each(|v| *v /= m as f64);
    let mut cov = Matrix::zeros(n, n);
    let mut dev = vec![0.0; n];
    for row in batch.rows() {
        for j in 0..n {
            dev[j] = scale * (row[j] - center[j]) - mean[j];
        }
        for i in 0..n {
            for j in 0..=i {
                cov[(i, j)] += dev[i] * dev[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = cov[(i, j)] / (m - 1) as f64;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    let standard_errors = (0..n).map(|j| (cov[(j, j)] / m as f64).sqrt()).collect();
    Ok(BatchStatistics {
        mean,
        covariance: cov,
        standard_errors,
    })
}

/// Lag-1 autocorrelation of each coordinate, computed within chains.
pub fn lag1_autocorrelation(batch: &SampleBatch) -> Vec<f64> {
    let n = batch.n;
    let mut offsets = Vec::with_capacity(batch.chains.len());
    let mut start = 0;
    for c in &batch.chains {
        offsets.push((start, start + c.0.rows));
        start += c.0.rows;
    }
    if offsets.is_empty() {
        offsets.push((0, batch.len()));
    }
    (0..n)
        .map(|j| {
            let (mut num, mut den) = (0.0, 0.0);
            for &(lo, hi) in &offsets {
                if hi - lo < 2 {
                    continue;
                }
                let mean = (lo..hi).map(|i| batch.row(i)[j]).sum::<f64>() / (hi - lo) as f64;
                for i in lo..hi {
                    let d = batch.row(i)[j] - mean;
                    den += d * d;
                    if i + 1 < hi {
                        num += d * (batch.row(i + 1)[j] - mean);
                    }
                }
            }
            if den > 0.0 {
                num / den
            } else {
                0.0
            }
        })
        .collect()
}

/// Writes a batch as CSV: `#`-prefixed metadata lines, then one row per
/// sample with 17 significant digits.
pub fn write_csv<W: Write>(batch: &SampleBatch, mut w: W) -> io::Result<()> {
    let p = &batch.params;
    writeln!(w, "# coords={:?}", batch.coords)?;
    writeln!(
        w,
        "# n={} a={} b={} kappa={}",
        p.n(),
        p.a(),
        p.b(),
        p.kappa()
    )?;
    writeln!(w, "# seed={} chains={}", batch.seed, batch.chains.len())?;
    writeln!(w, "# acceptance_rate={:.17e}", batch.acceptance_rate)?;
    writeln!(w, "# rows={}", batch.len())?;
    let mut line = String::new();
    for row in batch.rows() {
        line.clear();
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&format!("{v:.16e}"));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Reads the numeric rows of a CSV written by [`write_csv`], skipping
/// comment lines.
pub fn read_csv_rows<R: BufRead>(r: R) -> io::Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for line in r.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let row = trimmed
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
            })
            .collect::<io::Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}
