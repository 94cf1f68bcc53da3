use std::convert::Infallible;

use crate::error::MetricError;
use crate::metric::{Embedder, EmbeddingVector};
use crate::tokenize::tokenize;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, b| (h ^ u64::from(*b)).wrapping_mul(FNV_PRIME))
}

/// Signed feature hashing of the text's tokens into a fixed number of
/// buckets, normalized to unit length.
///
/// Deterministic and offline. Cosine between two embeddings approximates
/// bag-of-words overlap, which is enough to exercise the pipeline without a
/// model; it is not a semantic encoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashEmbedder {
    dimension: usize,
}

impl HashEmbedder {
    pub const MIN_DIMENSION: usize = 8;

    pub fn new(dimension: usize) -> Result<Self, MetricError> {
        if dimension < Self::MIN_DIMENSION {
            return Err(MetricError::DimensionTooSmall(dimension));
        }
        Ok(Self { dimension })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vector(&self, text: &str) -> EmbeddingVector {
        let mut values = vec![0.0; self.dimension];
        for token in tokenize(text).iter() {
            let (bucket, sign) = self.slot(token.as_bytes());
            values[bucket] += sign;
        }
        if values.iter().all(|v| *v == 0.0) {
            // no tokens, or every token cancelled out
            let (bucket, sign) = self.slot(text.as_bytes());
            values[bucket] = sign;
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        values.iter_mut().for_each(|v| *v /= norm);
        EmbeddingVector::new(values).expect("hashed vector is finite and non-zero")
    }

    fn slot(&self, bytes: &[u8]) -> (usize, f64) {
        let h = fnv1a(bytes);
        let bucket = (h % self.dimension as u64) as usize;
        let sign = if h >> 63 == 1 { -1.0 } else { 1.0 };
        (bucket, sign)
    }
}

impl Embedder for HashEmbedder {
    type Error = Infallible;

    fn embed(&self, text: &str) -> Result<EmbeddingVector, Infallible> {
        Ok(self.vector(text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::cosine_similarity;
    use proptest::prelude::*;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn rejects_small_dimension() {
        assert_eq!(HashEmbedder::new(4), Err(MetricError::DimensionTooSmall(4)));
        assert!(HashEmbedder::new(8).is_ok());
    }

    #[test]
    fn deterministic_and_self_similar() {
        let e = HashEmbedder::new(64).unwrap();
        let text = "Create a REST endpoint that returns user profiles";
        assert_eq!(e.vector(text), e.vector(text));
        let c = cosine_similarity(&e.vector(text), &e.vector(text)).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tokenless_text_still_embeds() {
        let e = HashEmbedder::new(16).unwrap();
        assert!((e.vector("!!!").norm() - 1.0).abs() < 1e-12);
        assert!((e.vector("").norm() - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn unit_norm(text in "\\PC{0,80}") {
            let e = HashEmbedder::new(64).unwrap();
            prop_assert!((e.vector(&text).norm() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn unrelated_sentences(a in "[a-z]{3,8}( [a-z]{3,8}){2,6}", b in "[0-9]{3,8}( [0-9]{3,8}){2,6}") {
            let e = HashEmbedder::new(64).unwrap();
            let (va, vb) = (e.vector(&a), e.vector(&b));
            prop_assert_ne!(&va, &vb);
            let c = cosine_similarity(&va, &vb).unwrap();
            prop_assert!((-1.0..=1.0).contains(&c));
        }
    }
}
