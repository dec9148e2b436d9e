//! `pg-surf <curvature|verify|reconstruct|probe|mesh> --config <path> [--set key=value ...]`
//!
//! Exit codes: 0 success, 1 suite failure or tolerance breach, 2 config
//! error, 3 no admissible grid point, 4 branch violation during
//! reconstruction. `PG_SURF_THREADS` caps the worker pool.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Failure(String),
    #[error("no admissible grid point: {0}")]
    Empty(String),
    #[error("branch violation: {0}")]
    Branch(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Failure(_) | CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Empty(_) => 3,
            CliError::Branch(_) => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Sample K, H, ε and W over a grid.
    Curvature,
    /// Run constancy, cross-check and motion-invariance suites on a family.
    Verify,
    /// Integrate a reduced ODE and compare with its closed form.
    Reconstruct,
    /// Bounded search for a constant non-zero K surface of the second kind.
    Probe,
    /// Export a Wavefront OBJ mesh with a curvature sidecar CSV.
    Mesh,
}

#[derive(Debug, Parser)]
#[command(name = "pg-surf", version, about = "Curvature of factorable surfaces in pseudo-Galilean space")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override a config value: dotted key, JSON value (bare strings allowed).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("PG_SURF_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("PG_SURF_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| CliError::Config(format!("{}: {e}", cli.config.display())))?;
    let cfg = config::load(&text, &cli.set)?;
    match cli.command {
        Command::Curvature => commands::curvature(&cfg),
        Command::Verify => commands::verify(&cfg),
        Command::Reconstruct => commands::reconstruct(&cfg),
        Command::Probe => commands::probe(&cfg),
        Command::Mesh => commands::mesh(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pg-surf: {e}");
            ExitCode::from(e.code())
        }
    }
}
