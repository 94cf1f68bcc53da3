use serde::{Deserialize, Serialize};

use super::lexicon::Lexicon;
use crate::tokenize::{fold_word, word_spans, TokenSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tag {
    Noun,
    ProperNoun,
    Verb,
    Other,
}

impl Tag {
    /// Nouns, proper nouns and verbs are the categories that count as keywords.
    pub fn is_content(self) -> bool {
        !matches!(self, Tag::Other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub token: String,
    pub tag: Tag,
}

/// A part-of-speech backend for keyword extraction.
///
/// `tokens` is `tokenize(original_text)`; the original is passed so that a
/// tagger can consult casing and sentence boundaries. Implementations return
/// exactly one tag per token.
pub trait Tagger: Send + Sync {
    fn tag(&self, tokens: &TokenSequence, original_text: &str) -> Vec<TaggedToken>;
}

const NOUN_SUFFIXES: &[&str] = &["tion", "sion", "ment", "ity", "ness", "ance", "ence", "ship", "er", "or", "ure"];
const VERB_SUFFIXES: &[&str] = &["ate", "ize", "ise", "ify", "ing", "ed"];
const MIN_SUFFIX_WORD_LEN: usize = 5;

/// Deterministic rule tagger.
///
/// Rules, first match wins: numbers and function words are OTHER; capitalized
/// words not at a sentence start (and acronyms anywhere) are PROPER_NOUN; the
/// technical-noun list gives NOUN; the verb list gives VERB; noun suffixes
/// give NOUN; verb suffixes give VERB; a sentence-initial word is read as an
/// imperative VERB; everything else is NOUN.
#[derive(Debug, Clone)]
pub struct RuleTagger {
    function_words: Lexicon,
    verbs: Lexicon,
    tech_nouns: Lexicon,
}

impl Default for RuleTagger {
    fn default() -> Self {
        Self::with_function_words(Lexicon::function_words())
    }
}

impl RuleTagger {
    /// A rule tagger whose closed-class list is replaced by `function_words`.
    pub fn with_function_words(function_words: Lexicon) -> Self {
        Self { function_words, verbs: Lexicon::verbs(), tech_nouns: Lexicon::tech_nouns() }
    }

    fn tag_one(&self, token: &str, shape: WordShape) -> Tag {
        if token.chars().all(char::is_numeric) || self.function_words.contains(token) {
            return Tag::Other;
        }
        if shape.acronym || (shape.capitalized && !shape.sentence_initial) {
            return Tag::ProperNoun;
        }
        if self.tech_nouns.contains(token) {
            return Tag::Noun;
        }
        if self.verbs.contains(token) {
            return Tag::Verb;
        }
        let long = token.chars().count() >= MIN_SUFFIX_WORD_LEN;
        if long && NOUN_SUFFIXES.iter().any(|s| token.ends_with(s)) {
            return Tag::Noun;
        }
        if long && VERB_SUFFIXES.iter().any(|s| token.ends_with(s)) {
            return Tag::Verb;
        }
        if shape.sentence_initial {
            return Tag::Verb;
        }
        Tag::Noun
    }
}

impl Tagger for RuleTagger {
    fn tag(&self, tokens: &TokenSequence, original_text: &str) -> Vec<TaggedToken> {
        let shapes = word_shapes(original_text);
        let aligned =
            shapes.len() == tokens.len() && shapes.iter().zip(tokens.iter()).all(|((t, _), token)| t == token);
        tokens
            .iter()
            .enumerate()
            .map(|(i, token)| {
                let shape =
                    if aligned { shapes[i].1 } else { WordShape { sentence_initial: i == 0, ..WordShape::default() } };
                TaggedToken { token: token.clone(), tag: self.tag_one(token, shape) }
            })
            .collect()
    }
}

/// Tags `tokens` with the default rule tagger.
pub fn tag_tokens(tokens: &TokenSequence, original_text: &str) -> Vec<TaggedToken> {
    RuleTagger::default().tag(tokens, original_text)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct WordShape {
    capitalized: bool,
    acronym: bool,
    sentence_initial: bool,
}

fn is_sentence_break(gap: &str) -> bool {
    gap.chars().any(|c| matches!(c, '.' | '!' | '?' | ':' | ';' | '\n'))
}

/// Folded tokens of `text` paired with the shape of the raw word they came
/// from, in tokenizer order.
fn word_shapes(text: &str) -> Vec<(String, WordShape)> {
    let mut out = Vec::new();
    let mut prev_end = 0;
    for (start, word) in word_spans(text) {
        let gap = &text[prev_end..start];
        let sentence_initial = prev_end == 0 && out.is_empty() || is_sentence_break(gap);
        prev_end = start + word.len();

        let letters: Vec<char> = word.chars().filter(|c| c.is_alphabetic()).collect();
        let capitalized = word.chars().next().is_some_and(char::is_uppercase);
        let acronym = letters.len() >= 2 && letters.iter().all(|c| c.is_uppercase());
        let shape = WordShape { capitalized, acronym, sentence_initial };
        for (k, token) in fold_word(word).into_iter().enumerate() {
            let shape = if k == 0 { shape } else { WordShape { sentence_initial: false, ..shape } };
            out.push((token, shape));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenize::tokenize;

    fn tags(text: &str) -> Vec<(String, Tag)> {
        tag_tokens(&tokenize(text), text).into_iter().map(|t| (t.token, t.tag)).collect()
    }

    fn pairs(expected: &[(&str, Tag)]) -> Vec<(String, Tag)> {
        expected.iter().map(|(w, t)| (w.to_string(), *t)).collect()
    }

    #[test]
    fn empty() {
        assert!(tags("").is_empty());
    }

    #[test]
    fn imperative_sentence() {
        assert_eq!(
            tags("Create a user table"),
            pairs(&[("create", Tag::Verb), ("a", Tag::Other), ("user", Tag::Noun), ("table", Tag::Noun)])
        );
    }

    #[test]
    fn mid_sentence_capitals_are_proper_nouns() {
        assert_eq!(
            tags("Use Spring Boot"),
            pairs(&[("use", Tag::Verb), ("spring", Tag::ProperNoun), ("boot", Tag::ProperNoun)])
        );
    }

    #[test]
    fn acronyms_are_proper_nouns_even_at_sentence_start() {
        let t = tags("REST endpoints. SQL schema");
        assert_eq!(t[0].1, Tag::ProperNoun);
        assert_eq!(t[1].1, Tag::Noun);
        assert_eq!(t[2].1, Tag::ProperNoun);
    }

    #[test]
    fn sentence_start_after_period_is_not_proper() {
        let t = tags("Store the order. Display totals");
        assert_eq!(t[3], ("display".to_string(), Tag::Verb));
        assert_eq!(t[4], ("totals".to_string(), Tag::Noun));
    }

    #[test]
    fn function_words_only() {
        assert!(tags("the of and").iter().all(|(_, t)| *t == Tag::Other));
    }

    #[test]
    fn suffix_rules() {
        let t = tags("the validation of users should serialize records, returning data");
        let find = |w: &str| t.iter().find(|(tok, _)| tok == w).unwrap().1;
        assert_eq!(find("validation"), Tag::Noun);
        assert_eq!(find("users"), Tag::Noun);
        assert_eq!(find("serialize"), Tag::Verb);
        assert_eq!(find("returning"), Tag::Verb);
        assert_eq!(find("should"), Tag::Other);
    }

    #[test]
    fn numbers_are_other() {
        assert_eq!(tags("port 8080")[1].1, Tag::Other);
    }

    #[test]
    fn misaligned_tokens_still_get_one_tag_each() {
        let tokens = TokenSequence::new(["alpha", "the", "beta"]).unwrap();
        let tagged = tag_tokens(&tokens, "unrelated text");
        assert_eq!(tagged.len(), 3);
        assert_eq!(tagged[1].tag, Tag::Other);
    }

    #[test]
    fn custom_function_words() {
        let tagger = RuleTagger::with_function_words(Lexicon::parse("user\n"));
        let text = "Create a user table";
        let tagged = tagger.tag(&tokenize(text), text);
        assert_eq!(tagged[1].tag, Tag::Noun); // "a" is no longer a function word
        assert_eq!(tagged[2].tag, Tag::Other);
    }
}
