//! Command-line front end for `opent-core`: gate catalog, matrix and Kraus
//! file formats, multi-threaded Monte-Carlo drivers, per-command reports and
//! the `verify` reproduction run.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod gate;
pub mod parallel;
pub mod verify;

pub use error::{exit, CliError, CliResult};
