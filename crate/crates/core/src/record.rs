use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::metric::{SbcBreakdown, SbcWeights};

/// Application layer a requirement belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Layer {
    Ui,
    Data,
    Logic,
}

impl Layer {
    pub fn as_str(self) -> &'static str {
        match self {
            Layer::Ui => "UI",
            Layer::Data => "DATA",
            Layer::Logic => "LOGIC",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Layer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "UI" => Ok(Layer::Ui),
            "DATA" => Ok(Layer::Data),
            "LOGIC" => Ok(Layer::Logic),
            other => Err(format!("unknown layer {other:?} (expected UI, DATA or LOGIC)")),
        }
    }
}

/// One dataset row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementRecord {
    pub id: u64,
    pub layer: Layer,
    pub technology: String,
    pub requirement: String,
}

/// Identity of one evaluation: which model, which iteration, which question.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleKey {
    pub model: String,
    pub iteration: u32,
    pub question_id: u64,
}

/// One (model, iteration, question) outcome as stored in result files.
///
/// Field order is the serialization order. Error records carry `null` scores
/// and a message in `error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationResult {
    pub model: String,
    pub iteration: u32,
    pub question_id: u64,
    pub technology: String,
    pub input_requirements: String,
    pub generated_code: String,
    pub reverse_generated_requirements: String,
    pub final_accuracy_score: Option<f64>,
    pub semantic_similarity: Option<f64>,
    #[serde(rename = "BLEU_score")]
    pub bleu_score: Option<f64>,
    pub completeness_score: Option<f64>,
    pub missing_elements: Vec<String>,
    pub extra_elements: Vec<String>,
    pub error: Option<String>,
}

impl EvaluationResult {
    /// A record with no scores yet; fill it with [`with_breakdown`] or
    /// [`with_error`].
    ///
    /// [`with_breakdown`]: EvaluationResult::with_breakdown
    /// [`with_error`]: EvaluationResult::with_error
    pub fn pending(key: &TripleKey, record: &RequirementRecord) -> Self {
        Self {
            model: key.model.clone(),
            iteration: key.iteration,
            question_id: key.question_id,
            technology: record.technology.clone(),
            input_requirements: record.requirement.clone(),
            generated_code: String::new(),
            reverse_generated_requirements: String::new(),
            final_accuracy_score: None,
            semantic_similarity: None,
            bleu_score: None,
            completeness_score: None,
            missing_elements: Vec::new(),
            extra_elements: Vec::new(),
            error: None,
        }
    }

    pub fn with_breakdown(mut self, breakdown: SbcBreakdown) -> Self {
        self.final_accuracy_score = Some(breakdown.final_accuracy_score);
        self.semantic_similarity = Some(breakdown.semantic_similarity);
        self.bleu_score = Some(breakdown.bleu_score);
        self.completeness_score = Some(breakdown.completeness_score);
        self.missing_elements = breakdown.missing_elements.into_iter().collect();
        self.extra_elements = breakdown.extra_elements.into_iter().collect();
        self.error = None;
        self
    }

    pub fn with_error(mut self, message: impl Into<String>) -> Self {
        self.error = Some(message.into());
        self
    }

    pub fn key(&self) -> TripleKey {
        TripleKey { model: self.model.clone(), iteration: self.iteration, question_id: self.question_id }
    }

    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }

    /// Final score of a successful record.
    pub fn score(&self) -> Option<f64> {
        if self.is_error() {
            None
        } else {
            self.final_accuracy_score
        }
    }

    /// Whether the stored final score equals the weighted sum of the stored
    /// components within `tolerance`. Error records are trivially consistent;
    /// a success record with a missing component is not.
    pub fn is_self_consistent(&self, weights: &SbcWeights, tolerance: f64) -> bool {
        if self.is_error() {
            return true;
        }
        match (self.final_accuracy_score, self.semantic_similarity, self.bleu_score, self.completeness_score) {
            (Some(f), Some(s), Some(b), Some(c)) => {
                let expected = weights.semantic() * s + weights.bleu() * b + weights.completeness() * c;
                (f - expected).abs() <= tolerance
            }
            _ => false,
        }
    }
}
