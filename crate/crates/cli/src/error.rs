//! Error taxonomy of the runner, with a fixed exit-code contract:
//!
//!   2  configuration rejected (unreadable, unparsable, or schema-invalid)
//!   3  numerical instability (a stability bound or runtime divergence)
//!   4  invariant breach (an enabled monitor failed on an otherwise
//!      completed run)
//!   1  anything else (I/O and internal failures)
//!
//! Schema problems are collected, not short-circuited: one failed load
//! reports every violation it can find, each prefixed with the offending
//! field path.

use std::path::PathBuf;

use thiserror::Error;

/// Exit code for configuration errors.
pub const EXIT_CONFIG: u8 = 2;
/// Exit code for violated stability bounds or runtime divergence.
pub const EXIT_INSTABILITY: u8 = 3;
/// Exit code for failed invariant monitors.
pub const EXIT_BREACH: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    /// The scenario file could not be read at all.
    #[error("cannot read {path}: {source}")]
    Unreadable {
        path: PathBuf,
        source: std::io::Error,
    },

    /// The scenario file is not valid JSON.
    #[error("parse error at byte {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },

    /// The document parsed but violates the scenario schema; every
    /// detected violation is listed, one per line, naming its field.
    #[error("invalid scenario ({} violation{}):\n{}",
        .violations.len(),
        if .violations.len() == 1 { "" } else { "s" },
        .violations.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n"))]
    Schema { violations: Vec<String> },

    /// A stability bound was violated or the integration diverged.
    #[error("numerical instability: {message}; retry with dt <= {suggested_dt:.6e}")]
    Instability { message: String, suggested_dt: f64 },

    /// An engine failed for a reason that is not a stability problem.
    #[error("engine failure: {0}")]
    Engine(String),

    /// Artifact writing failed.
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    /// A manifest hash did not match the file on disk.
    #[error("manifest mismatch for {file}: recorded {recorded}, found {found}")]
    ManifestMismatch {
        file: String,
        recorded: String,
        found: String,
    },
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Unreadable { .. }
            | CliError::Parse { .. }
            | CliError::Schema { .. } => EXIT_CONFIG,
            CliError::Instability { .. } => EXIT_INSTABILITY,
            CliError::Engine(_) | CliError::Io(_) | CliError::ManifestMismatch { .. } => 1,
        }
    }

    /// Wrap a list of field-level violations.
    pub fn schema(violations: Vec<String>) -> Self {
        CliError::Schema { violations }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
