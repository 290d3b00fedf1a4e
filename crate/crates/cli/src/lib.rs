//! Command-line front end for the g2tw toolkit: JSON in, JSON out.

pub mod claims;
pub mod commands;

use serde::Serialize;
use thiserror::Error;

/// Environment variable holding the default sampler seed.
pub const SEED_ENV: &str = "G2TW_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Input(_) => "input",
            CliError::Precondition(_) => "precondition",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            error: &'a str,
            message: String,
        }
        serde_json::to_string(&Body { error: self.kind(), message: self.to_string() }).expect("error body serializes")
    }
}

/// Result of a command: text for stdout and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    pub fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }
}
