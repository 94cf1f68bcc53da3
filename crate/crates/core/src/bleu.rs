use std::collections::HashMap;

use crate::tokenize::TokenSequence;

const MAX_ORDER: usize = 4;

/// Sentence-level BLEU of `candidate` against a single `reference`.
///
/// Modified n-gram precisions are taken up to order `min(4, |candidate|)` and
/// combined by geometric mean with uniform weights. There is no smoothing: a
/// zero precision at any order gives 0. A candidate shorter than the reference
/// pays the brevity penalty `exp(1 - |reference| / |candidate|)`. Empty input
/// on either side scores 0.
pub fn bleu(candidate: &TokenSequence, reference: &TokenSequence) -> f64 {
    let (cand, refr) = (candidate.as_slice(), reference.as_slice());
    if cand.is_empty() || refr.is_empty() {
        return 0.0;
    }

    let max_order = MAX_ORDER.min(cand.len());
    let mut log_sum = 0.0;
    for n in 1..=max_order {
        let matched = clipped_matches(cand, refr, n);
        if matched == 0 {
            return 0.0;
        }
        let total = cand.len() - n + 1;
        log_sum += (matched as f64 / total as f64).ln();
    }
    let precision = (log_sum / max_order as f64).exp();

    let brevity = if cand.len() < refr.len() { (1.0 - refr.len() as f64 / cand.len() as f64).exp() } else { 1.0 };
    (brevity * precision).clamp(0.0, 1.0)
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

fn clipped_matches(candidate: &[String], reference: &[String], n: usize) -> usize {
    let reference = ngram_counts(reference, n);
    ngram_counts(candidate, n)
        .into_iter()
        .map(|(gram, count)| count.min(reference.get(gram).copied().unwrap_or(0)))
        .sum()
}
