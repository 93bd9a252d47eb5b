//! Batch experiment driver for the VQE error-mitigation workbench.
//!
//! ```text
//! mitiq-forge <ground-state|optimize|benchmark|readout-study>
//!             --config <path> --out <dir> [--seed N] [--threads K]
//! ```
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 on solver or
//! fit failures that abort a whole run.

mod cache;
mod commands;
mod config;
mod report;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mitiq-forge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for reports (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Override the config's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the data-parallel stages (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and perturbative ground-state energies over an h_x sweep.
    GroundState(CommonArgs),
    /// SPSA-optimize the ansatz against an exact or noisy objective.
    Optimize(CommonArgs),
    /// Compare mitigation methods over an ansatz-layer sweep.
    Benchmark(CommonArgs),
    /// Biased-parity residual tables for the readout algebra.
    ReadoutStudy(CommonArgs),
}

/// Errors split by exit code: bad inputs (2) vs failed runs (3).
pub enum CliError {
    Config(anyhow::Error),
    Run(anyhow::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Run(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(e) => format!("configuration error: {e:#}"),
            CliError::Run(e) => format!("run failed: {e:#}"),
        }
    }
}

pub type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = match &cli.command {
        Command::GroundState(a)
        | Command::Optimize(a)
        | Command::Benchmark(a)
        | Command::ReadoutStudy(a) => a,
    };

    #[cfg(feature = "parallel")]
    if args.threads > 0 {
        // A second invocation in-process would fail; that is fine.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    if args.threads > 0 {
        eprintln!("warning: built without the `parallel` feature; --threads is ignored");
    }

    if let Err(e) = std::fs::create_dir_all(&args.out) {
        eprintln!("configuration error: cannot create output dir: {e}");
        return ExitCode::from(2);
    }

    let result = match &cli.command {
        Command::GroundState(a) => commands::ground_state::run(a),
        Command::Optimize(a) => commands::optimize::run(a),
        Command::Benchmark(a) => commands::benchmark::run(a),
        Command::ReadoutStudy(a) => commands::readout_study::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Loads and validates a config file, applying the seed override.
fn load_config<T: serde::de::DeserializeOwned>(args: &CommonArgs) -> Result<(T, String), CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        CliError::Config(anyhow::anyhow!(
            "cannot read {}: {e}",
            args.config.display()
        ))
    })?;
    let cfg: T = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(anyhow::anyhow!("invalid config: {e}")))?;
    // Digest the raw bytes: the report provenance is the file as given.
    let digest = mitiq_forge_core::digest::digest_bytes(text.as_bytes());
    Ok((cfg, digest))
}
