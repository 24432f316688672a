//! Library side of the `sgad` binary: argument model, preset resolution,
//! command execution and rendering. Kept separate from `main` so the
//! pipeline can be driven in tests without spawning a process.

// `!(x >= 0.0)` is the NaN-rejecting form of `x < 0.0`; used on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

pub use args::{Args, CommandKind, Format};
pub use config::{resolve, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Internal(_) => 1,
            CliError::Certification(_) => 2,
        }
    }
}

/// Rendered output plus whether every emitted value passed certification.
pub struct Rendered {
    pub text: String,
    pub certified: bool,
}

pub fn run(args: &Args) -> Result<Rendered, CliError> {
    let cfg = resolve(args)?;
    let report = commands::execute(&cfg)?;
    let text = output::render(&cfg, &report)?;
    Ok(Rendered { text, certified: report.certified })
}
