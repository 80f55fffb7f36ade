//! `surfpoisson` command-line front end.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use surfpoisson::Error;

#[derive(Debug, Parser)]
#[command(name = "surfpoisson", version, about = "Poisson problems on parametrized surfaces with boundary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the chart for nondegeneracy; writes validation.json.
    Validate(CommonArgs),
    /// Solve the pure-Neumann problem; writes solution.csv and report.json.
    Solve(CommonArgs),
    /// Build V with div_Γ V = F and V·n = χ; writes field.csv and divfield.json.
    Divfield(CommonArgs),
    /// Check the divergence theorem and integration by parts; writes identities.csv.
    Identities(CommonArgs),
    /// Manufactured-solution refinement study; writes convergence.csv.
    Convergence(CommonArgs),
    /// Smallest nonzero Neumann eigenvalue and coercivity; writes eigen.json.
    Eigen(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides `output` in the config).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Random seed (overrides `seed` in the config).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Do not print a summary on stdout.
    #[arg(long)]
    pub quiet: bool,
}

/// Exit status of a command that ran to completion but whose result fails
/// its own acceptance test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Degenerate,
    NotConverged,
}

const EXIT_CONFIG: u8 = 1;
const EXIT_GEOMETRY: u8 = 2;
const EXIT_COMPATIBILITY: u8 = 3;
const EXIT_SOLVER: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateMetric { .. }
        | Error::ZeroTangent { .. }
        | Error::MeshFailure(_)
        | Error::InvalidMesh(_) => EXIT_GEOMETRY,
        Error::IncompatibleLoad { .. } => EXIT_COMPATIBILITY,
        Error::MaxIterExceeded { .. } | Error::EigenNoConvergence { .. } | Error::SingularInteriorBlock => {
            EXIT_SOLVER
        }
        _ => EXIT_CONFIG,
    }
}

fn thread_pool() -> Result<(), Error> {
    let Ok(raw) = std::env::var("SURFPOISSON_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("SURFPOISSON_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    let result = thread_pool().and_then(|()| match &cli.command {
        Command::Validate(args) => commands::validate(args),
        Command::Solve(args) => commands::solve(args),
        Command::Divfield(args) => commands::divfield(args),
        Command::Identities(args) => commands::identities(args),
        Command::Convergence(args) => commands::convergence(args),
        Command::Eigen(args) => commands::eigen(args),
    });
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Degenerate) => ExitCode::from(EXIT_GEOMETRY),
        Ok(Status::NotConverged) => ExitCode::from(EXIT_SOLVER),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
