//! Cross-iteration and cross-model views over evaluation results.

mod chart;
mod csv_export;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use chart::{emit_chart, render_chart};
pub use csv_export::{
    export_csv, read_consolidated_csv, read_results_csv, write_consolidated_csv, write_results_csv, CsvRows,
};

use crate::error::AnalysisError;
use crate::record::{EvaluationResult, Layer};

/// Lower bound of the interpretable band.
pub const INTERPRETABLE_THRESHOLD: f64 = 0.55;
/// Lower bound of the semantically aligned band.
pub const ALIGNED_THRESHOLD: f64 = 0.65;

/// Best score per model for one question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsolidatedRow {
    pub question_id: u64,
    pub per_model_max: BTreeMap<String, f64>,
}

/// Per question, the maximum final score each model reached over its
/// iterations. Error records do not contribute; a model with only errors for
/// a question has no entry in that row. Rows are sorted by question id.
pub fn consolidate_max(results: &[EvaluationResult]) -> Vec<ConsolidatedRow> {
    let mut rows: BTreeMap<u64, BTreeMap<String, f64>> = BTreeMap::new();
    for r in results {
        let row = rows.entry(r.question_id).or_default();
        if let Some(score) = r.score() {
            row.entry(r.model.clone()).and_modify(|best| *best = best.max(score)).or_insert(score);
        }
    }
    rows.into_iter().map(|(question_id, per_model_max)| ConsolidatedRow { question_id, per_model_max }).collect()
}

/// All model names appearing in `rows`, sorted.
pub fn model_names(rows: &[ConsolidatedRow]) -> Vec<String> {
    rows.iter().flat_map(|r| r.per_model_max.keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QualityBand {
    Low,
    Interpretable,
    SemanticallyAligned,
}

impl fmt::Display for QualityBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QualityBand::Low => "LOW",
            QualityBand::Interpretable => "INTERPRETABLE",
            QualityBand::SemanticallyAligned => "SEMANTICALLY_ALIGNED",
        })
    }
}

/// Band of an SBC score; each threshold belongs to the band above it.
pub fn quality_band(score: f64) -> Result<QualityBand, AnalysisError> {
    if !(0.0..=1.0).contains(&score) {
        return Err(AnalysisError::ScoreOutOfRange(score));
    }
    Ok(if score >= ALIGNED_THRESHOLD {
        QualityBand::SemanticallyAligned
    } else if score >= INTERPRETABLE_THRESHOLD {
        QualityBand::Interpretable
    } else {
        QualityBand::Low
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandCounts {
    pub low: usize,
    pub interpretable: usize,
    pub semantically_aligned: usize,
}

impl BandCounts {
    fn add(&mut self, band: QualityBand) {
        match band {
            QualityBand::Low => self.low += 1,
            QualityBand::Interpretable => self.interpretable += 1,
            QualityBand::SemanticallyAligned => self.semantically_aligned += 1,
        }
    }
}

/// Descriptive statistics of final scores for one (model, layer) group.
/// `layer` is `None` for questions whose layer is unknown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub model: String,
    pub layer: Option<Layer>,
    pub count: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std_dev: f64,
    pub bands: BandCounts,
}

/// Mean, population standard deviation and band counts of final scores per
/// (model, layer). Error records are skipped and empty groups omitted.
/// `layers` maps question ids to their layer.
pub fn summary_stats(
    results: &[EvaluationResult],
    layers: &BTreeMap<u64, Layer>,
) -> Result<Vec<GroupStats>, AnalysisError> {
    let mut groups: BTreeMap<(String, Option<Layer>), Vec<f64>> = BTreeMap::new();
    for r in results {
        if let Some(score) = r.score() {
            let layer = layers.get(&r.question_id).copied();
            groups.entry((r.model.clone(), layer)).or_default().push(score);
        }
    }
    groups
        .into_iter()
        .map(|((model, layer), scores)| {
            let n = scores.len() as f64;
            let mean = scores.iter().sum::<f64>() / n;
            let variance = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
            let mut bands = BandCounts::default();
            for s in &scores {
                bands.add(quality_band(*s)?);
            }
            Ok(GroupStats { model, layer, count: scores.len(), mean, std_dev: variance.sqrt(), bands })
        })
        .collect()
}
