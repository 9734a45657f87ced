//! Command-line driver: reproducible, file-based experiments over the
//! observational-entropy decomposition library.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation or tolerance failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

mod commands;
mod io;

#[derive(Debug, Parser)]
#[command(
    name = "oedecomp",
    about = "Observational-entropy decomposition, degradation channels, and the four-qubit degradation experiment",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the built-in 4-dim reference case under the reset channel
    /// against its stored reference values (JSON report).
    #[command(name = "verify-theorem1")]
    VerifyTheorem1(VerifyArgs),

    /// Sweep the reset channel over an ε grid and emit plot-ready CSV.
    #[command(name = "scan-epsilon")]
    ScanEpsilon(ScanArgs),

    /// Diagonalize the Ising chain and report the energy windows (JSON).
    Spectrum(SpectrumArgs),

    /// Run one degradation-protocol trace (CSV) plus a summary (JSON).
    #[command(name = "run-vqa")]
    RunVqa(RunArgs),

    /// Aggregate per-run correlations over many traces into an ensemble
    /// report.
    Ensemble(EnsembleArgs),

    /// Resource metrics of a serialized state against a coarse-graining.
    Metrics(MetricsArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Reset strength ε of the channel.
    #[arg(long, default_value_t = 0.26)]
    epsilon: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Number of grid points (inclusive of both ends).
    #[arg(long, default_value_t = 101)]
    points: usize,
    /// Upper end of the ε grid.
    #[arg(long, default_value_t = 0.5)]
    max_epsilon: f64,
    /// State file (matrix JSON); defaults to the built-in reference state.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Coarse-graining file; defaults to the built-in two-block partition.
    #[arg(long)]
    cg: Option<PathBuf>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long, default_value_t = 4)]
    n_qubits: usize,
    #[arg(long, default_value_t = 1.0)]
    field_h: f64,
    /// Window fraction f: low is E < E_min + f·ΔE, high is E > E_max - f·ΔE.
    #[arg(long, default_value_t = 0.3)]
    fraction: f64,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Config JSON file; flags below override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    total_iters: Option<usize>,
    #[arg(long)]
    fraction: Option<f64>,
    #[arg(long)]
    field_h: Option<f64>,
    /// Cost basis: "degraded" or "pure".
    #[arg(long)]
    cost_on: Option<String>,
    /// Trace CSV path; defaults to trace_seed{seed}.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON path; printed to stdout when omitted.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Correlation window "a:b" (inclusive) for the summary.
    #[arg(long, default_value = "31:149")]
    window: String,
}

#[derive(Debug, Args)]
struct EnsembleArgs {
    /// Directory of existing trace CSVs (trace_seed{N}.csv).
    #[arg(long, conflicts_with = "seeds")]
    traces: Option<PathBuf>,
    /// Seed range "a:b" (inclusive) to run in parallel workers.
    #[arg(long)]
    seeds: Option<String>,
    /// Config JSON applied to every run (seed field is overridden).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    /// Correlation window "a:b" (inclusive) on iteration index.
    #[arg(long, default_value = "31:149")]
    window: String,
    /// Ensemble report JSON path; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Per-run CSV path (seed,r,p,ci_low,ci_high).
    #[arg(long)]
    per_run: Option<PathBuf>,
    /// When running seeds, also write each trace CSV into this directory.
    #[arg(long)]
    traces_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    /// Density-matrix JSON file.
    #[arg(long)]
    state: PathBuf,
    /// Coarse-graining JSON file.
    #[arg(long)]
    cg: PathBuf,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Operational failure carrying the exit code contract.
#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Failure(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Failure(_) => 2,
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(m) | AppError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<oedecomp::Error> for AppError {
    fn from(e: oedecomp::Error) -> Self {
        AppError::Failure(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Failure(e.to_string())
    }
}

impl From<serde_json::Error> for AppError {
    fn from(e: serde_json::Error) -> Self {
        AppError::Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful outputs; everything else is a
            // usage error (exit 1, not clap's default 2)
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };

    let result = match cli.command {
        Command::VerifyTheorem1(args) => commands::verify_theorem1(args),
        Command::ScanEpsilon(args) => commands::scan_epsilon(args),
        Command::Spectrum(args) => commands::spectrum(args),
        Command::RunVqa(args) => commands::run_vqa(args),
        Command::Ensemble(args) => commands::ensemble(args),
        Command::Metrics(args) => commands::metrics(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
