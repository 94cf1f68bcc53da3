use std::fs;
use std::path::Path;

use sbc_core::EvaluationResult;

use super::PipelineError;

/// JSON Lines text of `results`: one record per line, each line terminated
/// by a newline.
pub fn render_results(results: &[EvaluationResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&serde_json::to_string(r).expect("result records always serialize"));
        out.push('\n');
    }
    out
}

/// Writes `results` as JSON Lines, replacing the file if it exists.
pub fn persist_results(results: &[EvaluationResult], path: impl AsRef<Path>) -> Result<(), PipelineError> {
    let path = path.as_ref();
    fs::write(path, render_results(results)).map_err(|source| PipelineError::Io { path: path.into(), source })
}

pub fn parse_results(text: &str, path: &Path) -> Result<Vec<EvaluationResult>, PipelineError> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(idx, line)| {
            serde_json::from_str(line).map_err(|e| PipelineError::ResultsParse {
                path: path.into(),
                line: idx + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn load_results(path: impl AsRef<Path>) -> Result<Vec<EvaluationResult>, PipelineError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.into(), source })?;
    parse_results(&text, path)
}
