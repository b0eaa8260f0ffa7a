#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod config;
mod format;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NoRoots(String),
    #[error(transparent)]
    Core(#[from] loop_modes::Error),
    #[error("{context}: {source}")]
    Evaluation { context: String, source: loop_modes::Error },
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use loop_modes::Error as E;
        let core = match self {
            CliError::Input(_) => return 2,
            CliError::NoRoots(_) => return 3,
            CliError::Io(_) => return 1,
            CliError::Core(e) | CliError::Evaluation { source: e, .. } => e,
        };
        match core {
            E::Domain(_) | E::Parameters(_) | E::InvalidRange { .. } => 2,
            E::AiryRange(_)
            | E::NonFinite { .. }
            | E::InvalidBracket { .. }
            | E::NoConvergence(_)
            | E::StepUnderflow(_) => 4,
            E::NotAMode { .. } => 5,
        }
    }
}

fn main() -> ExitCode {
    let args = match cli::Cli::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = Vec::new();
    let result = commands::run(args, &mut out);
    // Data already produced (e.g. the header of an empty result) is still emitted.
    let written = std::io::stdout().lock().write_all(&out);
    match result.and(written.map_err(CliError::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let tag = if matches!(e, CliError::NoRoots(_)) { "warning" } else { "error" };
            eprintln!("{tag}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
