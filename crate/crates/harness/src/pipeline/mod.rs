//! Dataset in, one scored record per (model, iteration, question) out.

mod config;
mod dataset;
mod persist;
mod run;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{PromptOverrides, RunConfig};
pub use dataset::{load_dataset, parse_csv, parse_jsonl, DatasetError};
pub use persist::{load_results, parse_results, persist_results, render_results};
pub use run::{evaluate_pair, resume_run, run_evaluation, Evaluator, RunSettings};

use crate::providers::ProviderError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("no chat providers configured")]
    NoProviders,
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot parse run configuration: {0}")]
    ConfigParse(String),
    #[error("provider setup failed: {0}")]
    ProviderSetup(ProviderError),
    #[error("embedding provider unavailable: {0}")]
    EmbeddingUnavailable(ProviderError),
    #[error("unknown provider {0:?}")]
    UnknownProvider(String),
    #[error("existing result {0} is not part of this run (stale configuration or dataset?)")]
    StaleResult(String),
    #[error("existing results contain {0} more than once")]
    DuplicateResult(String),
    #[error("{0} must not be empty")]
    Precondition(&'static str),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    ResultsParse { path: PathBuf, line: usize, message: String },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}
