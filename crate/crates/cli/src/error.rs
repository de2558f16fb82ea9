//! CLI error type carrying the process exit code.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration validation
//! failure, 3 numerical failure (non-convergence or invariant violation).

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn config(msg: String) -> Self {
        CliError::Config(msg)
    }

    pub fn numerical(msg: String) -> Self {
        CliError::Numerical(msg)
    }

    pub fn io(msg: String) -> Self {
        CliError::Io(msg)
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    /// Wrap a core error that can only stem from bad configuration.
    pub fn from_setup(e: ptcoupler::Error) -> Self {
        CliError::Config(e.to_string())
    }

    /// Wrap a core error raised while computing.
    pub fn from_run(e: ptcoupler::Error) -> Self {
        match e {
            ptcoupler::Error::InvalidParams(_)
            | ptcoupler::Error::StateOutsideTruncation { .. } => CliError::Config(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
