use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use patseries::cli::{self, CliError, RunConfig};
use patseries::inversion::Formula;

/// Series reconstruction for photoacoustic tomography with
/// direction-dependent circular data.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run config; omitted sections use defaults.
    #[arg(long, short)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Rasterise the configured phantom.
    Phantom {
        #[command(flatten)]
        common: Common,
        #[arg(long, short)]
        out: PathBuf,
        /// Also write a 16-bit PGM.
        #[arg(long)]
        image: Option<PathBuf>,
        /// Also write the raw values as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Simulate data c1 p + c2 dp/dn, optionally with noise.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
        /// Noise standard deviation in percent of the data RMS.
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reconstruct the initial pressure from a sinogram container.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long, short)]
        data: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long)]
        image: Option<PathBuf>,
        /// Field container to report the relative error against.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        formula: Option<Formula>,
        /// Leading time samples to use.
        #[arg(long)]
        time_samples: Option<usize>,
    },
    /// Reconstruction error against data error over a noise grid.
    NoiseSweep {
        #[command(flatten)]
        common: Common,
        /// CSV output.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Range-condition residual of pressure data; exits 1 above threshold.
    RangeCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, short)]
        data: PathBuf,
        #[arg(long)]
        threshold: Option<f64>,
    },
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    match &common.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Validation(format!("--workers: {e}")))?;
    }
    match cli.command {
        Command::Phantom {
            common,
            out,
            image,
            csv,
        } => {
            let cfg = load(&common)?;
            let f = cli::cmd_phantom(&cfg, &out, image.as_deref(), csv.as_deref())?;
            println!("phantom {}x{} written to {}", f.nx(), f.ny(), out.display());
        }
        Command::Simulate {
            common,
            out,
            c1,
            c2,
            noise,
            seed,
        } => {
            let mut cfg = load(&common)?;
            cfg.model.c1 = c1.unwrap_or(cfg.model.c1);
            cfg.model.c2 = c2.unwrap_or(cfg.model.c2);
            cfg.noise.percent = noise.unwrap_or(cfg.noise.percent);
            cfg.noise.seed = seed.unwrap_or(cfg.noise.seed);
            let report = cli::cmd_simulate(&cfg, &out)?;
            println!(
                "sinogram {}x{} written to {}",
                report.data.n_theta(),
                report.data.n_t(),
                out.display()
            );
            if let (Some(full), Some(window)) = (report.data_error, report.data_error_window) {
                println!(
                    "relative data error {:.4} (reconstruction window {:.4})",
                    full, window
                );
            }
        }
        Command::Reconstruct {
            common,
            data,
            out,
            image,
            truth,
            formula,
            time_samples,
        } => {
            let mut cfg = load(&common)?;
            if formula.is_some() {
                cfg.reconstruction.formula = formula;
            }
            if time_samples.is_some() {
                cfg.reconstruction.time_samples = time_samples;
            }
            let report =
                cli::cmd_reconstruct(&cfg, &data, &out, image.as_deref(), truth.as_deref())?;
            println!(
                "formula {} with weights ({}, {}) written to {}",
                report.formula,
                report.weights.0,
                report.weights.1,
                out.display()
            );
            if let Some(e) = report.relative_error {
                println!("relative reconstruction error {e:.6}");
            }
        }
        Command::NoiseSweep { common, out } => {
            let cfg = load(&common)?;
            let rows = cli::cmd_noise_sweep(&cfg, &out)?;
            println!("{} runs written to {}", rows.len(), out.display());
        }
        Command::RangeCheck {
            common,
            data,
            threshold,
        } => {
            let mut cfg = load(&common)?;
            cfg.range_check.threshold = threshold.unwrap_or(cfg.range_check.threshold);
            let report = cli::cmd_range_check(&cfg, &data)?;
            println!(
                "range residual {:.6e} threshold {:.6e} {}",
                report.residual,
                report.threshold,
                if report.pass { "pass" } else { "fail" }
            );
            if !report.pass {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
