use std::path::PathBuf;

use thiserror::Error;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_AUDIT_FAIL: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] curvlab_core::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// 3 for anything the user can fix in the input, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        use curvlab_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Read { .. } => EXIT_CONFIG,
            CliError::Core(
                E::InvalidProfile(_)
                | E::ProfileInvalid(_)
                | E::InvalidNonlinearity(_)
                | E::GridTooCoarse { .. }
                | E::OutsideChart,
            ) => EXIT_CONFIG,
            CliError::Core(_) | CliError::Write { .. } => EXIT_SOLVER,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
