//! Reference implementations used to cross-check the library. They share no
//! code with the crate under test.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// Textbook sentence BLEU: product of clipped n-gram precisions raised to
/// 1/N, N = min(4, |candidate|), no smoothing, brevity penalty for short
/// candidates, 0 for empty input.
pub fn sentence_bleu(candidate: &[String], reference: &[String]) -> f64 {
    if candidate.is_empty() || reference.is_empty() {
        return 0.0;
    }
    let order = candidate.len().min(4);
    let mut product = 1.0f64;
    for n in 1..=order {
        let count = |seq: &[String]| {
            let mut m: BTreeMap<String, u64> = BTreeMap::new();
            let mut i = 0;
            while i + n <= seq.len() {
                *m.entry(seq[i..i + n].join("\u{1}")).or_insert(0) += 1;
                i += 1;
            }
            m
        };
        let cand = count(candidate);
        let refr = count(reference);
        let mut clipped = 0u64;
        let mut total = 0u64;
        for (gram, c) in &cand {
            total += c;
            clipped += (*c).min(*refr.get(gram).unwrap_or(&0));
        }
        if clipped == 0 {
            return 0.0;
        }
        product *= clipped as f64 / total as f64;
    }
    let geo = product.powf(1.0 / order as f64);
    let (c, r) = (candidate.len() as f64, reference.len() as f64);
    let bp = if c < r { (1.0 - r / c).exp() } else { 1.0 };
    bp * geo
}

/// Completeness over subsets of a small universe encoded as bitmasks, by
/// walking every universe element.
pub struct SetOutcome {
    pub missing: Vec<usize>,
    pub extra: Vec<usize>,
    pub score: f64,
}

pub fn completeness_by_enumeration(a: u32, b: u32, universe: usize) -> SetOutcome {
    let mut missing = Vec::new();
    let mut extra = Vec::new();
    let mut union = 0i64;
    for e in 0..universe {
        let (in_a, in_b) = (a >> e & 1 == 1, b >> e & 1 == 1);
        if in_a || in_b {
            union += 1;
        }
        if in_a && !in_b {
            missing.push(e);
        }
        if in_b && !in_a {
            extra.push(e);
        }
    }
    let penalty = (missing.len() + extra.len()) as i64;
    let score = if union == 0 { 1.0 } else { f64::max(0.0, 1.0 - penalty as f64 / union as f64) };
    SetOutcome { missing, extra, score }
}

/// Deterministic xorshift generator so the oracle suites need no RNG crate.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Random sequence of length 1..=max_len over a vocabulary of `vocab` words.
    pub fn token_seq(&mut self, max_len: u64, vocab: u64) -> Vec<String> {
        let len = 1 + self.below(max_len);
        (0..len).map(|_| format!("w{}", self.below(vocab))).collect()
    }
}
