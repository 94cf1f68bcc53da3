//! Content-keyword extraction and the completeness component.
//!
//! Keywords are the surface forms (lowercased, no stemming) of every token
//! tagged as a noun, proper noun or verb. Completeness compares the keyword
//! sets of the original and reconstructed requirement:
//!
//! ```text
//! missing = K1 \ K2        extra = K2 \ K1
//! score   = max(0, 1 - (|missing| + |extra|) / max(|K1 ∪ K2|, 1))
//! ```

mod lexicon;
mod tagger;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use lexicon::Lexicon;
pub use tagger::{tag_tokens, RuleTagger, Tag, TaggedToken, Tagger};

use crate::tokenize::tokenize;

/// Set of lowercased keyword tokens. Iterates in sorted order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KeywordSet(BTreeSet<String>);

impl KeywordSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, keyword: &str) -> bool {
        self.0.contains(keyword)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn difference(&self, other: &KeywordSet) -> KeywordSet {
        KeywordSet(self.0.difference(&other.0).cloned().collect())
    }

    pub fn union_len(&self, other: &KeywordSet) -> usize {
        self.0.union(&other.0).count()
    }

    pub fn into_inner(self) -> BTreeSet<String> {
        self.0
    }
}

impl<S: Into<String>> FromIterator<S> for KeywordSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self(iter.into_iter().map(Into::into).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessResult {
    pub score: f64,
    pub missing: KeywordSet,
    pub extra: KeywordSet,
}

/// Completeness of `reversed` keywords against `original` keywords.
pub fn completeness(original: &KeywordSet, reversed: &KeywordSet) -> CompletenessResult {
    let missing = original.difference(reversed);
    let extra = reversed.difference(original);
    let penalty = missing.len() + extra.len();
    let total = original.union_len(reversed).max(1);
    // penalty <= total always holds, the max only guards the float form
    let score = (1.0 - penalty as f64 / total as f64).max(0.0);
    CompletenessResult { score, missing, extra }
}

/// Keyword extraction over a pluggable tagger.
#[derive(Clone)]
pub struct KeywordExtractor {
    tagger: Arc<dyn Tagger>,
}

impl Default for KeywordExtractor {
    fn default() -> Self {
        Self::new(RuleTagger::default())
    }
}

impl std::fmt::Debug for KeywordExtractor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KeywordExtractor").finish_non_exhaustive()
    }
}

impl KeywordExtractor {
    pub fn new(tagger: impl Tagger + 'static) -> Self {
        Self { tagger: Arc::new(tagger) }
    }

    pub fn tag(&self, text: &str) -> Vec<TaggedToken> {
        self.tagger.tag(&tokenize(text), text)
    }

    pub fn extract(&self, text: &str) -> KeywordSet {
        self.tag(text).into_iter().filter(|t| t.tag.is_content()).map(|t| t.token).collect()
    }
}

/// Keywords of `text` under the default rule tagger.
pub fn extract_keywords(text: &str) -> KeywordSet {
    KeywordExtractor::default().extract(text)
}
