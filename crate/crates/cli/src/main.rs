//! `gapless`: sweeps, verification runs, and eigenfunction dumps for the
//! hyperbolic strip family.

mod commands;
mod config;
mod error;
mod output;
mod svg;
mod sweep;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{EigenArgs, GeometryCmd};
use crate::config::ConfigArgs;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "gapless", version, about = "Dirichlet gap experiments on hyperbolic strips")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One CSV row per mu: eigenvalues, gap, and D^2 gap (or the kappa chain for n >= 3).
    GapSweep(ConfigArgs),
    /// Runs every inequality check and writes a JSON report.
    Verify(ConfigArgs),
    /// Dumps an eigenfunction as `phi,h` CSV.
    Eigen(EigenArgs),
    /// Distance and diameter queries.
    #[command(subcommand)]
    Geometry(GeometryCmd),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GapSweep(args) => sweep::cmd_gap_sweep(&args.resolve()?),
        Command::Verify(args) => verify::cmd_verify(&args.resolve()?),
        Command::Eigen(args) => commands::cmd_eigen(&args),
        Command::Geometry(cmd) => commands::cmd_geometry(&cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gapless: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
