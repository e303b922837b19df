//! Command-line layer for momentforge: argument parsing, versioned JSON
//! reports, bundled datasets and the acceptance driver.
//!
//! The algorithms live in `momentforge_core`, re-exported here as [`core`].

pub use momentforge_core as core;

pub mod accept;
pub mod cli;
pub mod commands;
pub mod datasets;
pub mod parse;
pub mod report;

use thiserror::Error;

/// Errors that abort a command before a verdict exists. Failed verdicts are
/// not errors; they are recorded in the report.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("digest mismatch for {file}: manifest pins {expected}, file has {found}")]
    Digest {
        file: String,
        expected: String,
        found: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Options shared by every command.
#[derive(Clone, Debug, Default)]
pub struct Ctx {
    pub command: String,
    pub seed: u64,
    pub expect: Vec<String>,
    pub cross_check: bool,
    pub trust_fan: bool,
}

pub const DEFAULT_SEED: u64 = 42;
