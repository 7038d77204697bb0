mod args;
mod commands;
mod record;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<crofton_core::Error> for CliError {
    fn from(e: crofton_core::Error) -> Self {
        use crofton_core::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidParameter { .. } => CliError::Usage(msg),
            E::InvalidDimension { .. } | E::Degenerate(_) | E::TooFewPoints { .. } | E::OutsideShape => {
                CliError::Data(msg)
            }
            E::Tangent | E::NoUniqueProjection { .. } | E::Counter { .. } => CliError::Numerical(msg),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sample(a) => commands::sample(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::Bench(a) => commands::bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
