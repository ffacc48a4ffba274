//! Front end for `kr-core`: JSON encodings, a result cache, the command
//! implementations behind the `kr` binary and the acceptance suite.

use std::fmt;

pub mod cache;
pub mod commands;
pub mod json;
pub mod suite;

/// Exit code 2 for bad input, 1 when the mathematics disagrees.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Mismatch(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "error: {s}"),
            CliError::Mismatch(s) => write!(f, "mismatch: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("invalid JSON: {e}"))
    }
}
