//! Command-line front end: runs walks, ring-cavity simulations, the
//! classical baseline, and parameter sweeps, emitting CSV plus a summary.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error.

mod args;
mod configfile;
mod output;
mod run;
mod sweep;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
}

impl From<qwalk::Error> for CliError {
    fn from(err: qwalk::Error) -> Self {
        CliError::Config(err.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qwalk-cli",
    version,
    about = "Coined-walk and optical-cavity simulator",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Walk on the integer line.
    Line(run::LineArgs),
    /// Walk on a ring of 2M+1 sites.
    Circle(run::CircleArgs),
    /// Walk on the line with the balanced-drift (splitting-angle) coin.
    Galton(run::GaltonArgs),
    /// Classical random-walk baseline (symmetric binomial).
    Classical(run::ClassicalArgs),
    /// Element-level optical ring-cavity simulation.
    Cavity(run::CavityArgs),
    /// Run one configuration per parameter value, concurrently.
    Sweep(sweep::SweepArgs),
    /// Execute a run described by a key-value config file.
    Run {
        /// Path to the manifest (`key = value` lines; see README).
        #[arg(long)]
        config: PathBuf,
    },
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Line(args) => run::line(&args),
        Command::Circle(args) => run::circle(&args),
        Command::Galton(args) => run::galton(&args),
        Command::Classical(args) => run::classical(&args),
        Command::Cavity(args) => run::cavity(&args),
        Command::Sweep(args) => sweep::sweep(&args),
        Command::Run { config } => {
            let argv = configfile::argv_from_file(&config)?;
            let cli = Cli::try_parse_from(argv)
                .map_err(|e| CliError::Config(format!("in {}: {e}", config.display())))?;
            execute(cli.command)
        }
    }
}

fn main() -> ExitCode {
    // clap itself exits with code 2 on usage errors, matching the config
    // exit code used below.
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Io(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
