//! Command-line front end: JSON problem files in, reports out.
//!
//! Complex numbers are `[re, im]` pairs throughout. Exit codes: 0 success,
//! 1 validation error, 2 parse error, 3 numeric failure.

mod commands;
mod problem;
mod report;

pub use commands::{cmd_discriminate, cmd_filter, cmd_sample, cmd_two_qubit, run, RunOptions, SampleParams};
pub use problem::{Mode, ProblemFile, RandomSpec, ToleranceOverrides};
pub use report::{DiscriminationSection, FilteringSection, Format, Report, SampleSummary, TwoQubitSection};

use thiserror::Error;

use crate::error::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}
