//! Command line front end: algebra spec files, command dispatch and report emission.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod report;
pub mod spec;

pub use commands::{run, Cli};
pub use report::{emit, CommandReport, Format, Table, Verdict};
pub use spec::{load_algebra, AlgebraSpec, LoadedAlgebra};

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "LIETRACE_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] lietrace::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn context(self, what: &str) -> Self {
        match self {
            CliError::Parse(m) => CliError::Parse(format!("{what}: {m}")),
            CliError::Core(e) => CliError::Parse(format!("{what}: {e}")),
            other => other,
        }
    }
}

/// Process exit status for a verdict.
pub fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Pass | Verdict::Info => 0,
        Verdict::Fail => 1,
    }
}

pub const ERROR_EXIT: i32 = 2;
