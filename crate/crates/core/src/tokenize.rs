use std::ops::Deref;

use crate::error::MetricError;

/// Ordered, lowercased word tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TokenSequence(Vec<String>);

impl TokenSequence {
    /// Builds a sequence from tokens that already satisfy the tokenizer's
    /// output rules.
    pub fn new<I, S>(tokens: I) -> Result<Self, MetricError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens = tokens
            .into_iter()
            .map(|token| {
                let token = token.into();
                if is_valid_token(&token) {
                    Ok(token)
                } else {
                    Err(MetricError::InvalidToken(token))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self(tokens))
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }
}

impl Deref for TokenSequence {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

fn is_valid_token(token: &str) -> bool {
    !token.is_empty() && !token.chars().any(char::is_whitespace) && token.to_lowercase() == token
}

/// Lowercases `text` and splits it on every maximal run of non-alphanumeric
/// characters. Hyphens and underscores separate tokens like any other
/// punctuation.
pub fn tokenize(text: &str) -> TokenSequence {
    TokenSequence(split_words(text).flat_map(fold_word).collect())
}

/// Case-folds one raw word. Folding can introduce non-alphanumeric marks
/// (for example a combining dot), so the folded word is split again.
pub(crate) fn fold_word(word: &str) -> Vec<String> {
    let folded = word.to_lowercase();
    if folded.chars().all(char::is_alphanumeric) {
        return vec![folded];
    }
    split_words(&folded).map(str::to_owned).collect()
}

/// Word spans of the raw text under the tokenizer's splitting rule, with
/// their byte offsets. The tagger uses these to look at original casing.
pub(crate) fn word_spans(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut start = None;
    let mut chars = text.char_indices().chain(std::iter::once((text.len(), ' ')));
    std::iter::from_fn(move || {
        for (idx, ch) in chars.by_ref() {
            match (ch.is_alphanumeric(), start) {
                (true, None) => start = Some(idx),
                (false, Some(s)) => {
                    start = None;
                    return Some((s, &text[s..idx]));
                }
                _ => {}
            }
        }
        None
    })
}

fn split_words(text: &str) -> impl Iterator<Item = &str> {
    word_spans(text).map(|(_, word)| word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(text: &str) -> Vec<String> {
        tokenize(text).into_inner()
    }

    #[test]
    fn empty_text() {
        assert!(toks("").is_empty());
        assert!(toks("  ,;!? ").is_empty());
    }

    #[test]
    fn strips_punctuation() {
        assert_eq!(toks("Hello, world!"), ["hello", "world"]);
    }

    #[test]
    fn hyphen_and_underscore_split() {
        assert_eq!(toks("REST API for user-login"), ["rest", "api", "for", "user", "login"]);
        assert_eq!(toks("snake_case_name"), ["snake", "case", "name"]);
    }

    #[test]
    fn keeps_digits_and_non_ascii_letters() {
        assert_eq!(toks("HTTP/2 über café v10"), ["http", "2", "über", "café", "v10"]);
    }

    #[test]
    fn word_spans_offsets() {
        let spans: Vec<_> = word_spans("a, Bc-d").collect();
        assert_eq!(spans, [(0, "a"), (3, "Bc"), (6, "d")]);
    }

    #[test]
    fn new_rejects_bad_tokens() {
        assert!(TokenSequence::new(["ok", "fine"]).is_ok());
        assert!(TokenSequence::new(["Upper"]).is_err());
        assert!(TokenSequence::new([""]).is_err());
        assert!(TokenSequence::new(["two words"]).is_err());
    }

    proptest! {
        #[test]
        fn tokens_are_well_formed(text in "\\PC{0,60}") {
            let seq = tokenize(&text);
            for token in seq.iter() {
                prop_assert!(!token.is_empty());
                prop_assert!(!token.chars().any(char::is_whitespace));
                prop_assert_eq!(&token.to_lowercase(), token);
            }
        }

        #[test]
        fn tokenizing_is_case_insensitive(text in "[a-zA-Z0-9 ,.!_-]{0,60}") {
            prop_assert_eq!(tokenize(&text), tokenize(&text.to_uppercase()));
        }
    }
}
