//! Scenario files, result persistence, plots, and the command-line surface
//! for the `cclf-core` simulator.

pub mod audit;
pub mod check;
pub mod config;
pub mod csvio;
pub mod plot;
pub mod sweep;

use std::fmt;
use std::path::PathBuf;

/// Process exit codes used by the CLI.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Top-level error type; the variant decides the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("invariant suite failure: {0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::CheckFailed(_) => EXIT_CHECK_FAILED,
        }
    }

    pub fn validation(e: impl fmt::Display) -> Self {
        CliError::Validation(e.to_string())
    }

    pub fn runtime(e: impl fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Files produced by a `run` invocation.
#[derive(Debug, Clone)]
pub struct OutputFiles {
    pub trajectory_csv: PathBuf,
    pub metrics_csv: PathBuf,
    pub manifest_json: PathBuf,
    pub trajectory_svg: PathBuf,
    pub phi2_svg: PathBuf,
}
