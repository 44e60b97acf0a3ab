//! File formats, report generation and the command implementations behind
//! the `siqc` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod schedule_file;

pub use config::AppConfig;

/// Failure of a CLI command, mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("not measurable: {0}")]
    NotMeasurable(String),
    #[error(transparent)]
    Model(siqc_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidConfig(_) => 2,
            CliError::NotMeasurable(_) => 3,
            _ => 1,
        }
    }
}

impl From<siqc_core::Error> for CliError {
    fn from(e: siqc_core::Error) -> Self {
        use siqc_core::Error as E;
        match e {
            E::InvalidParameter { .. }
            | E::InvalidRecoupling { .. }
            | E::HadamardTooLarge { .. }
            | E::UnreachableTarget { .. } => {
                CliError::InvalidConfig(e.to_string())
            }
            E::NotMeasurable => CliError::NotMeasurable(e.to_string()),
            other => CliError::Model(other),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
