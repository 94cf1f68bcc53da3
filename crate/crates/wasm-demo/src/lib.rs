//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export is a thin wrapper over a plain function that returns JSON or
//! SVG text, so the logic is testable natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use sbc_core::analysis::{consolidate_max, model_names, quality_band, render_chart, QualityBand};
use sbc_core::keywords::{KeywordExtractor, TaggedToken};
use sbc_core::{score_pair, EvaluationResult, HashEmbedder, SbcBreakdown, SbcWeights};

/// Embedding dimension used in the browser; there is no model server there.
pub const DEMO_DIMENSION: usize = 256;

#[derive(Debug, Serialize)]
pub struct ScoreReport {
    #[serde(flatten)]
    pub breakdown: SbcBreakdown,
    pub quality_band: QualityBand,
}

#[derive(Debug, Serialize)]
pub struct TagReport {
    pub tokens: Vec<TaggedToken>,
    pub keywords: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ChartReport {
    pub svg: String,
    pub models: Vec<String>,
    pub questions: usize,
    pub skipped_errors: usize,
}

fn weights(semantic: f64, bleu: f64, completeness: f64) -> Result<SbcWeights, String> {
    SbcWeights::new(semantic, bleu, completeness).map_err(|e| e.to_string())
}

/// Scores `reversed` against `original` with the offline hash embedding.
pub fn score(original: &str, reversed: &str, weights: &SbcWeights) -> Result<ScoreReport, String> {
    let embedder = HashEmbedder::new(DEMO_DIMENSION).map_err(|e| e.to_string())?;
    let breakdown = score_pair(original, reversed, &embedder, weights).map_err(|e| e.to_string())?;
    let quality_band = quality_band(breakdown.final_accuracy_score).map_err(|e| e.to_string())?;
    Ok(ScoreReport { breakdown, quality_band })
}

pub fn tag(text: &str) -> TagReport {
    let extractor = KeywordExtractor::default();
    TagReport { tokens: extractor.tag(text), keywords: extractor.extract(text).into_inner().into_iter().collect() }
}

/// Consolidates JSON Lines results and draws the per-question maxima.
pub fn chart(results_jsonl: &str) -> Result<ChartReport, String> {
    let mut results = Vec::new();
    for (idx, line) in results_jsonl.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let r: EvaluationResult = serde_json::from_str(line).map_err(|e| format!("line {}: {e}", idx + 1))?;
        results.push(r);
    }
    let skipped_errors = results.iter().filter(|r| r.is_error()).count();
    let rows = consolidate_max(&results);
    let svg = render_chart(&rows).map_err(|e| e.to_string())?;
    Ok(ChartReport { svg, models: model_names(&rows), questions: rows.len(), skipped_errors })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("demo reports serialize")
}

/// JSON score breakdown plus quality band.
#[wasm_bindgen(js_name = scorePair)]
pub fn score_pair_js(
    original: &str,
    reversed: &str,
    semantic: f64,
    bleu: f64,
    completeness: f64,
) -> Result<String, JsError> {
    let weights = weights(semantic, bleu, completeness).map_err(|e| JsError::new(&e))?;
    score(original, reversed, &weights).map(|r| to_json(&r)).map_err(|e| JsError::new(&e))
}

/// JSON list of tagged tokens and the extracted keyword set.
#[wasm_bindgen(js_name = tagText)]
pub fn tag_text_js(text: &str) -> String {
    to_json(&tag(text))
}

/// JSON object with the SVG chart and a short summary.
#[wasm_bindgen(js_name = chartResults)]
pub fn chart_results_js(results_jsonl: &str) -> Result<String, JsError> {
    chart(results_jsonl).map(|r| to_json(&r)).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_pair_scores_one() {
        let report = score("Create a user table", "Create a user table", &SbcWeights::default()).unwrap();
        assert_eq!(report.breakdown.final_accuracy_score, 1.0);
        assert_eq!(report.quality_band, QualityBand::SemanticallyAligned);
        let json: serde_json::Value = serde_json::from_str(&to_json(&report)).unwrap();
        assert_eq!(json["quality_band"], "SEMANTICALLY_ALIGNED");
        assert_eq!(json["BLEU_score"], 1.0);
    }

    #[test]
    fn custom_weights_are_validated() {
        assert!(weights(0.5, 0.5, 0.5).is_err());
        let w = weights(1.0, 0.0, 0.0).unwrap();
        let r = score("Create a user table", "Create a user index", &w).unwrap();
        assert_eq!(r.breakdown.final_accuracy_score, r.breakdown.semantic_similarity);
    }

    #[test]
    fn tagging_lists_keywords() {
        let report = tag("Create a user table");
        assert_eq!(report.keywords, vec!["create", "table", "user"]);
        assert_eq!(report.tokens.len(), 4);
        let json = tag_text_js("Use Spring Boot");
        assert!(json.contains("\"PROPER_NOUN\""));
    }

    #[test]
    fn chart_from_jsonl() {
        let line = |model: &str, q: u64, s: &str| {
            format!(
                "{{\"model\":\"{model}\",\"iteration\":1,\"question_id\":{q},\"technology\":\"SQL\",\
                 \"input_requirements\":\"r\",\"generated_code\":\"c\",\"reverse_generated_requirements\":\"r\",\
                 \"final_accuracy_score\":{s},\"semantic_similarity\":{s},\"BLEU_score\":{s},\
                 \"completeness_score\":{s},\"missing_elements\":[],\"extra_elements\":[],\"error\":null}}"
            )
        };
        let text = [line("a", 1, "0.5"), line("b", 1, "0.7"), line("a", 2, "0.9"), String::new()].join("\n");
        let report = chart(&text).unwrap();
        assert_eq!(report.models, vec!["a", "b"]);
        assert_eq!(report.questions, 2);
        assert!(report.svg.starts_with("<svg"));
        assert!(chart("{not json}").unwrap_err().starts_with("line 1"));
        assert!(chart("").is_err());
    }
}
