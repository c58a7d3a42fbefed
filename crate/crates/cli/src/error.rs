//! CLI error type with the exit-code policy.
//!
//! Exit codes: 0 success (including membership yes), 1 negative answer
//! (membership no, admissibility not established), 2 validation failure,
//! 3 operation undefined (gluing or missing match), 4 I/O or syntax error.

use thiserror::Error;

use crate::formats::lex::ParseError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {error}")]
    Syntax { path: String, error: ParseError },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("operation undefined: {0}")]
    Undefined(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Syntax { .. } => 4,
            CliError::Validation(_) => 2,
            CliError::Undefined(_) => 3,
            CliError::Usage(_) => 4,
        }
    }
}

/// A negative but well-defined answer (exit code 1).
pub const EXIT_NO: i32 = 1;
