use std::io;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("embedding dimension mismatch: {left} vs {right} (incompatible embedding providers?)")]
    DimensionMismatch { left: usize, right: usize },
    #[error("embedding vector is empty")]
    EmptyVector,
    #[error("embedding vector has zero norm")]
    ZeroVector,
    #[error("embedding vector contains a non-finite value")]
    NonFinite,
    #[error("{name} component {value} is outside [0, 1]")]
    ComponentOutOfRange { name: &'static str, value: f64 },
    #[error("weight {name} = {value} is outside [0, 1]")]
    WeightOutOfRange { name: &'static str, value: f64 },
    #[error("weights must sum to 1, got {sum}")]
    WeightSum { sum: f64 },
    #[error("invalid token {0:?}: tokens are non-empty, lowercase and whitespace-free")]
    InvalidToken(String),
    #[error("hash embedding dimension must be at least 8, got {0}")]
    DimensionTooSmall(usize),
}

/// Failure while scoring a pair: either the embedder failed or the metric
/// rejected its output.
#[derive(Debug, Error)]
pub enum ScoreError<E> {
    #[error("embedding failed: {0}")]
    Embedding(E),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("score {0} is outside [0, 1]")]
    ScoreOutOfRange(f64),
    #[error("nothing to chart")]
    EmptyChart,
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed CSV at line {line}: {message}")]
    CsvField { line: u64, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}
