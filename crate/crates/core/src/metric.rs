use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bleu::bleu;
use crate::error::{MetricError, ScoreError};
use crate::keywords::{completeness, KeywordExtractor};
use crate::tokenize::tokenize;

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// A non-empty, finite, non-zero embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector(Vec<f64>);

impl EmbeddingVector {
    pub fn new(values: Vec<f64>) -> Result<Self, MetricError> {
        if values.is_empty() {
            return Err(MetricError::EmptyVector);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(MetricError::NonFinite);
        }
        let vector = Self(values);
        if vector.norm() == 0.0 {
            return Err(MetricError::ZeroVector);
        }
        Ok(vector)
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Cosine of the angle between two embeddings, in `[-1, 1]`.
pub fn cosine_similarity(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64, MetricError> {
    if a.dimension() != b.dimension() {
        return Err(MetricError::DimensionMismatch { left: a.dimension(), right: b.dimension() });
    }
    let dot: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
    // rounding can push |cos| a hair past 1
    Ok((dot / (a.norm() * b.norm())).clamp(-1.0, 1.0))
}

/// Maps a raw cosine onto the `[0, 1]` semantic component. Anti-correlated
/// embeddings count as no similarity at all.
pub fn semantic_component(raw_cosine: f64) -> f64 {
    raw_cosine.clamp(0.0, 1.0)
}

/// Component weights of the SBC score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct SbcWeights {
    semantic: f64,
    bleu: f64,
    completeness: f64,
}

#[derive(Serialize, Deserialize)]
struct RawWeights {
    semantic: f64,
    bleu: f64,
    completeness: f64,
}

impl TryFrom<RawWeights> for SbcWeights {
    type Error = MetricError;

    fn try_from(raw: RawWeights) -> Result<Self, MetricError> {
        SbcWeights::new(raw.semantic, raw.bleu, raw.completeness)
    }
}

impl From<SbcWeights> for RawWeights {
    fn from(w: SbcWeights) -> Self {
        RawWeights { semantic: w.semantic, bleu: w.bleu, completeness: w.completeness }
    }
}

impl Default for SbcWeights {
    fn default() -> Self {
        Self { semantic: 0.7, bleu: 0.1, completeness: 0.2 }
    }
}

impl SbcWeights {
    pub fn new(semantic: f64, bleu: f64, completeness: f64) -> Result<Self, MetricError> {
        for (name, value) in [("semantic", semantic), ("bleu", bleu), ("completeness", completeness)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(MetricError::WeightOutOfRange { name, value });
            }
        }
        let sum = semantic + bleu + completeness;
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(MetricError::WeightSum { sum });
        }
        Ok(Self { semantic, bleu, completeness })
    }

    pub fn semantic(&self) -> f64 {
        self.semantic
    }

    pub fn bleu(&self) -> f64 {
        self.bleu
    }

    pub fn completeness(&self) -> f64 {
        self.completeness
    }
}

/// Weighted sum of the three components. Each component must lie in `[0, 1]`.
pub fn sbc_combine(semantic: f64, bleu: f64, completeness: f64, weights: &SbcWeights) -> Result<f64, MetricError> {
    for (name, value) in [("semantic", semantic), ("bleu", bleu), ("completeness", completeness)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(MetricError::ComponentOutOfRange { name, value });
        }
    }
    let score = weights.semantic * semantic + weights.bleu * bleu + weights.completeness * completeness;
    Ok(score.clamp(0.0, 1.0))
}

/// Full result of comparing an original requirement with its reconstruction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbcBreakdown {
    pub semantic_similarity: f64,
    #[serde(rename = "BLEU_score")]
    pub bleu_score: f64,
    pub completeness_score: f64,
    pub final_accuracy_score: f64,
    /// Keywords of the original that the reconstruction lacks.
    pub missing_elements: BTreeSet<String>,
    /// Keywords of the reconstruction absent from the original.
    pub extra_elements: BTreeSet<String>,
}

impl SbcBreakdown {
    /// Recomputes the weighted sum from the stored components.
    pub fn recombined(&self, weights: &SbcWeights) -> f64 {
        weights.semantic * self.semantic_similarity
            + weights.bleu * self.bleu_score
            + weights.completeness * self.completeness_score
    }
}

/// Source of text embeddings.
pub trait Embedder {
    type Error;

    fn embed(&self, text: &str) -> Result<EmbeddingVector, Self::Error>;
}

impl<F, E> Embedder for F
where
    F: Fn(&str) -> Result<EmbeddingVector, E>,
{
    type Error = E;

    fn embed(&self, text: &str) -> Result<EmbeddingVector, E> {
        self(text)
    }
}

/// Scores `reversed` against `original` with the default rule tagger.
pub fn score_pair<E: Embedder>(
    original: &str,
    reversed: &str,
    embedder: &E,
    weights: &SbcWeights,
) -> Result<SbcBreakdown, ScoreError<E::Error>> {
    score_pair_with(original, reversed, embedder, weights, &KeywordExtractor::default())
}

/// Scores `reversed` against `original` using the given keyword tagger.
///
/// BLEU treats the reconstruction as the candidate and the original as the
/// reference, so terse reconstructions pay the brevity penalty.
pub fn score_pair_with<E: Embedder>(
    original: &str,
    reversed: &str,
    embedder: &E,
    weights: &SbcWeights,
    extractor: &KeywordExtractor,
) -> Result<SbcBreakdown, ScoreError<E::Error>> {
    let original_vec = embedder.embed(original).map_err(ScoreError::Embedding)?;
    let reversed_vec = embedder.embed(reversed).map_err(ScoreError::Embedding)?;
    let semantic = semantic_component(cosine_similarity(&original_vec, &reversed_vec)?);

    let bleu_score = bleu(&tokenize(reversed), &tokenize(original));

    let keywords_original = extractor.extract(original);
    let keywords_reversed = extractor.extract(reversed);
    let comp = completeness(&keywords_original, &keywords_reversed);

    let final_score = sbc_combine(semantic, bleu_score, comp.score, weights)?;
    Ok(SbcBreakdown {
        semantic_similarity: semantic,
        bleu_score,
        completeness_score: comp.score,
        final_accuracy_score: final_score,
        missing_elements: comp.missing.into_inner(),
        extra_elements: comp.extra.into_inner(),
    })
}
