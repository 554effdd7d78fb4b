//! Reading fan and cover files, running every analysis of `toric-core` on
//! them, and rendering the results as text or JSON.

pub mod commands;
pub mod input;
pub mod report;

pub use commands::{cmd_analyze, cmd_resolve, cmd_table, AnalyzeOptions, TableOptions};
pub use input::{parse_cover_file, parse_fan_file, CoverFile, FanFile};
pub use report::Report;

use thiserror::Error;
use toric_core::resolution::ResolutionError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }

    pub(crate) fn from_resolution(e: ResolutionError) -> Self {
        match e {
            ResolutionError::FibreBudgetExceeded { .. } | ResolutionError::CellBudgetExceeded { .. } => {
                CliError::Budget(e.to_string())
            }
            other => CliError::Validation(vec![other.to_string()]),
        }
    }
}
