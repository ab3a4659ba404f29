//! `jacobi-lab`: runs the library's experiments from a JSON config and flags.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{CommandName, ExperimentConfig, Format};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "jacobi-lab", version, about = "Jacobi expansion experiments")]
struct Cli {
    /// JSON experiment config; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    options: ExperimentConfig,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Basis values on a θ grid.
    Eval,
    /// Orthonormality check of the first basis functions.
    Gram,
    /// Kernel slices, ratio sweeps and L² profiles.
    Kernel,
    /// Build, validate and expand an atom.
    Atom,
    /// Growth fits of Hardy sums with a lowered exponent.
    Sharpness,
    /// Partial sums of the L¹ sup-divergence series.
    L1,
    /// Remainder orders of the small-θ and mid-interval asymptotics.
    Asympt,
    /// Admissible exponent in exact arithmetic.
    Exponent,
}

impl From<Command> for CommandName {
    fn from(c: Command) -> Self {
        match c {
            Command::Eval => CommandName::Eval,
            Command::Gram => CommandName::Gram,
            Command::Kernel => CommandName::Kernel,
            Command::Atom => CommandName::Atom,
            Command::Sharpness => CommandName::Sharpness,
            Command::L1 => CommandName::L1,
            Command::Asympt => CommandName::Asympt,
            Command::Exponent => CommandName::Exponent,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let base = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let mut flags = cli.options.clone();
    flags.command = cli.command.map(CommandName::from);
    let cfg = base.merged(&flags);
    let cmd = cfg.command.ok_or_else(|| CliError::Config("no command given".into()))?;
    let out = commands::run(cmd, &cfg)?;
    let text = match cfg.format.unwrap_or_default() {
        Format::Json => &out.json,
        Format::Csv => &out.csv,
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    match out.failure {
        Some(msg) => Err(CliError::Acceptance(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
