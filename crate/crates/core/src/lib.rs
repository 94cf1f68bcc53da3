//! Scoring of reverse-generated requirements against their originals.
//!
//! The SBC score is a weighted sum of three components computed between an
//! original requirement and the requirement reconstructed from generated code:
//!
//! * semantic similarity of the two texts' embeddings (cosine, floored at 0),
//! * sentence-level BLEU with the reconstruction as candidate,
//! * keyword completeness over the nouns, verbs and proper nouns of each text.
//!
//! Besides the score, the keyword comparison yields the *missing* elements
//! (requested but not reconstructed) and the *extra* elements (reconstructed
//! but never requested), the latter being a useful hallucination signal.
//!
//! Everything in this crate is pure and deterministic. Embeddings come from
//! any [`Embedder`]; [`HashEmbedder`] is a dependency-free offline stand-in.

pub mod analysis;
mod bleu;
mod embedding;
mod error;
pub mod keywords;
mod metric;
mod record;
mod tokenize;

pub use bleu::bleu;
pub use embedding::HashEmbedder;
pub use error::{AnalysisError, MetricError, ScoreError};
pub use metric::{
    cosine_similarity, sbc_combine, score_pair, score_pair_with, semantic_component, Embedder, EmbeddingVector,
    SbcBreakdown, SbcWeights,
};
pub use record::{EvaluationResult, Layer, RequirementRecord, TripleKey};
pub use tokenize::{tokenize, TokenSequence};
