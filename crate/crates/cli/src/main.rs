use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use jacobi_freeze::sampler::{DEFAULT_BURN_IN, DEFAULT_THINNING};
use jacobi_freeze_cli::commands::{
    cmd_clt, cmd_limits, cmd_normalization, cmd_precision, cmd_sample, cmd_spectrum, cmd_zeros,
    LimitMode, SampleOptions, CLT_FROBENIUS_THRESHOLD,
};
use jacobi_freeze_cli::report::RunReport;
use jacobi_freeze_cli::verify::{verify_all, VerifyOptions};

#[derive(Parser)]
#[command(name = "jacobi-freeze", version, about = "Freezing limits of beta-Jacobi ensembles")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Human,
}

#[derive(Args)]
struct Shape {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
}

#[derive(Args)]
struct Sampling {
    #[arg(long)]
    kappa: f64,
    /// Retained rows, summed over chains.
    #[arg(long = "m", default_value_t = 50_000)]
    n_samples: usize,
    #[arg(long, env = "JACOBI_FREEZE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    chains: usize,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    burn_in: usize,
    #[arg(long, default_value_t = DEFAULT_THINNING)]
    thinning: usize,
    /// Proposal scale; defaults to 2.4/sqrt(N).
    #[arg(long)]
    step_scale: Option<f64>,
}

impl Sampling {
    fn options(&self) -> SampleOptions {
        SampleOptions {
            n_samples: self.n_samples,
            seed: self.seed,
            n_chains: self.chains,
            burn_in: self.burn_in,
            thinning: self.thinning,
            step_scale: self.step_scale,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Hermite,
    Laguerre,
}

#[derive(Subcommand)]
enum Command {
    /// Freezing point, drift and closed-form scalars.
    Zeros(Shape),
    /// Precision matrices and determinants.
    Precision(Shape),
    /// Spectrum and eigenvectors of the trigonometric precision matrix.
    Spectrum(Shape),
    /// Run the sampler and write the batch as CSV.
    Sample {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        out: PathBuf,
    },
    /// Empirical covariance of sqrt(kappa)(X - z) against the limit.
    Clt {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = CLT_FROBENIUS_THRESHOLD)]
        threshold: f64,
    },
    /// Hermite or Laguerre degeneration tables.
    Limits {
        mode: Mode,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [1e2, 1e3, 1e4])]
        alphas: Vec<f64>,
    },
    /// Selberg constants and their freezing limit.
    Normalization {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_delimiter = ',', default_values_t = [1e2, 1e3, 1e4])]
        kappas: Vec<f64>,
    },
    /// Full acceptance grid.
    VerifyAll {
        #[arg(long, env = "JACOBI_FREEZE_SEED", default_value_t = 0)]
        seed: u64,
    },
}

fn run(command: Command) -> jacobi_freeze::Result<RunReport> {
    match command {
        Command::Zeros(s) => cmd_zeros(s.n, s.a, s.b),
        Command::Precision(s) => cmd_precision(s.n, s.a, s.b),
        Command::Spectrum(s) => cmd_spectrum(s.n, s.a, s.b),
        Command::Sample { shape: s, sampling, out } => {
            let file = File::create(&out).map_err(|e| {
                jacobi_freeze::Error::Config(format!("cannot create {}: {e}", out.display()))
            })?;
            let mut w = BufWriter::new(file);
            let report = cmd_sample(s.n, s.a, s.b, sampling.kappa, &sampling.options(), &mut w)?;
            w.flush()
                .map_err(|e| jacobi_freeze::Error::Config(format!("writing {} failed: {e}", out.display())))?;
            Ok(report)
        }
        Command::Clt { shape: s, sampling, threshold } => {
            cmd_clt(s.n, s.a, s.b, sampling.kappa, &sampling.options(), threshold)
        }
        Command::Limits { mode, n, beta, alphas } => {
            let mode = match mode {
                Mode::Hermite => LimitMode::Hermite,
                Mode::Laguerre => LimitMode::Laguerre,
            };
            cmd_limits(mode, n, beta, &alphas)
        }
        Command::Normalization { shape: s, kappas } => cmd_normalization(s.n, s.a, s.b, &kappas),
        Command::VerifyAll { seed } => verify_all(&VerifyOptions::new(seed)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(cli.command) {
        Ok(r) => r.stamped(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout().lock();
    let written = match cli.format {
        Format::Json => report.write_json(stdout),
        Format::Human => report.write_human(stdout),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("check failed: {}", c.name);
    }
    ExitCode::from(report.exit_code() as u8)
}
