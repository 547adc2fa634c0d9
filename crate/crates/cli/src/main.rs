//! `finite-radon`: geometry tables, identity checks, Radon transforms and
//! simulated tomography for odd prime dimensions.
//!
//! Exit status: 0 on success, 1 when a verification check fails, 2 on usage
//! or validation errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "finite-radon",
    version,
    about = "Discrete phase space and finite Radon transform for prime-dimensional qudits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the incidence table and Λ matrix.
    Geometry {
        #[command(flatten)]
        common: Common,
    },
    /// Check the plane axioms and every operator identity; exit 1 on failure.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Forward: operator JSON → quasi-distribution and point marginals.
    /// Inverse: point marginals CSV → quasi-distribution and operator JSON.
    Radon {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        direction: Direction,
        /// Input file (operator JSON for forward, marginals CSV or JSON for inverse).
        #[arg(long)]
        input: PathBuf,
    },
    /// Simulate MUB measurements of a state and reconstruct it.
    Tomography {
        #[command(flatten)]
        common: Common,
        /// Operator JSON holding the true density matrix.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        state: Option<PathBuf>,
        /// Use a random pure state derived from the seed.
        #[arg(long)]
        random: bool,
        /// Shots per basis, or `exact` to use the true probabilities.
        #[arg(long, value_parser = parse_shots)]
        shots: Shots,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Clip negative eigenvalues and renormalize.
        #[arg(long)]
        project_psd: bool,
        /// Also write the simulated measurement record (JSON) here.
        #[arg(long)]
        record: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Hilbert-space dimension, an odd prime.
    #[arg(long)]
    d: u64,
    /// Output directory (geometry, radon) or file (verify, tomography; default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shots {
    Exact,
    Count(u64),
}

fn parse_shots(s: &str) -> Result<Shots, String> {
    if s.eq_ignore_ascii_case("exact") {
        return Ok(Shots::Exact);
    }
    match s.parse::<u64>() {
        Ok(0) => Err("shot count must be at least 1".into()),
        Ok(n) => Ok(Shots::Count(n)),
        Err(_) => Err(format!("expected a positive integer or `exact`, got `{s}`")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::CheckFailed(name)) => {
            eprintln!("verification failed: {name}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
