use bisa_mech_core::MechError;
use thiserror::Error;

/// Command failures, split by the exit code they map to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, configuration or input data (exit 2).
    #[error("{0}")]
    Usage(String),
    /// Filesystem or environment failure (exit 3).
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<MechError> for CliError {
    fn from(e: MechError) -> Self {
        match e {
            MechError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}
