use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes. Each error class has its own code.
pub mod exit {
    pub const OK: i32 = 0;
    /// The command ran but an agreement flag or verification check is false.
    pub const DISAGREEMENT: i32 = 1;
    /// Invalid command line (reported by the argument parser).
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const PARSE: i32 = 4;
    /// Shape problems: non-square matrices, incompatible or unsupported dimensions.
    pub const DIMENSION: i32 = 5;
    /// Invalid values: non-unitary input, bad ranges, too few samples.
    pub const ARGUMENT: i32 = 6;
    /// Numerical failure: non-convergence or a Choi operator that is not PSD.
    pub const NUMERICAL: i32 = 7;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] opent_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        Self::Parse(msg.into())
    }

    pub fn dimension(msg: impl Into<String>) -> Self {
        Self::Core(opent_core::Error::Dimension(msg.into()))
    }

    pub fn argument(msg: impl Into<String>) -> Self {
        Self::Core(opent_core::Error::Argument(msg.into()))
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Self::Core(opent_core::Error::Numerical(msg.into()))
    }

    pub fn exit_code(&self) -> i32 {
        use opent_core::Error as E;
        match self {
            Self::Io { .. } | Self::Output(_) => exit::IO,
            Self::Parse(_) => exit::PARSE,
            Self::Core(E::Dimension(_) | E::Index(_) | E::UnsupportedDimension(_)) => exit::DIMENSION,
            Self::Core(E::Argument(_)) => exit::ARGUMENT,
            Self::Core(E::Numerical(_)) => exit::NUMERICAL,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Parse(e.to_string())
    }
}
