//! `flagbridge` command-line tool.
//!
//! Exit codes: 0 on success or a fault-tolerant verdict, 1 when a check
//! fails (not fault-tolerant, layout violations), 2 on usage or input
//! errors. Human-readable summaries go to stdout; `--out` files are
//! machine-readable, and `--out -` sends the machine format to stdout.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "flagbridge", version, about = "Flag-bridge fault-tolerant syndrome extraction workbench")]
struct Cli {
    /// Worker threads for shot parallelism; defaults to available parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the single-fault condition for a mapping's circuits.
    CheckFt(CheckFtArgs),
    /// Count ancillas, operations, CNOTs and timesteps.
    Characterize(CharacterizeArgs),
    /// Estimate logical error rates by Monte Carlo.
    Simulate(SimulateArgs),
    /// Sample a decoder training set.
    ExportDataset(ExportArgs),
    /// Check that every CNOT lands on a device coupling.
    ValidateLayout(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CheckFtArgs {
    /// Built-in mapping name, `bare-steane`, or a mapping JSON file.
    #[arg(long)]
    pub mapping: String,

    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CharacterizeArgs {
    /// Mapping to characterize; repeatable. Defaults to the six Steane and
    /// surface-code mappings.
    #[arg(long)]
    pub mapping: Vec<String>,

    /// Circuit text file to characterize; repeatable.
    #[arg(long)]
    pub circuits: Vec<PathBuf>,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    /// Physical error rate; repeatable.
    #[arg(long = "p")]
    pub p: Vec<f64>,

    /// Idle error rate as a fraction of p; repeatable.
    #[arg(long = "pi-ratio")]
    pub pi_ratio: Vec<f64>,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Mapping to simulate; repeatable.
    #[arg(long, required = true)]
    pub mapping: Vec<String>,

    #[command(flatten)]
    pub noise: NoiseArgs,

    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,

    /// Result file; a `.manifest.json` file is written beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub mapping: String,

    #[command(flatten)]
    pub noise: NoiseArgs,

    #[arg(long, default_value_t = flagbridge::dataset::DEFAULT_COUNT)]
    pub count: usize,

    /// Dataset file; a `.manifest.json` file is written beside it.
    #[arg(long)]
    pub out: PathBuf,

    /// Also write the code in text format here.
    #[arg(long)]
    pub code_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Mapping whose layout to check.
    #[arg(long, conflicts_with_all = ["circuits", "topology", "layout"])]
    pub mapping: Option<String>,

    /// Circuit text file.
    #[arg(long, requires_all = ["topology", "layout"])]
    pub circuits: Option<PathBuf>,

    /// Built-in topology name or topology JSON file.
    #[arg(long)]
    pub topology: Option<String>,

    /// Layout JSON file.
    #[arg(long)]
    pub layout: Option<PathBuf>,

    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(error::usage("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| error::usage(e.to_string()))?;
    }
    match cli.command {
        Command::CheckFt(a) => commands::check_ft(&a),
        Command::Characterize(a) => commands::characterize(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::ExportDataset(a) => commands::export_dataset(&a),
        Command::ValidateLayout(a) => commands::validate_layout(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
