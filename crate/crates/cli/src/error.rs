use std::fmt;

use sbc_core::AnalysisError;
use sbc_harness::{DatasetError, PipelineError, ProviderError};

pub const USAGE: u8 = 1;
pub const PROVIDER: u8 = 2;
pub const IO: u8 = 3;

/// A failed command, classified by exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Provider(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => USAGE,
            CliError::Provider(_) => PROVIDER,
            CliError::Io(_) => IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Provider(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        let message = e.to_string();
        match e {
            PipelineError::UnknownProvider(_) | PipelineError::Precondition(_) => CliError::Usage(message),
            PipelineError::ProviderSetup(_) | PipelineError::EmbeddingUnavailable(_) => CliError::Provider(message),
            _ => CliError::Io(message),
        }
    }
}

impl From<ProviderError> for CliError {
    fn from(e: ProviderError) -> Self {
        CliError::Provider(e.to_string())
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Io(e.to_string())
    }
}
