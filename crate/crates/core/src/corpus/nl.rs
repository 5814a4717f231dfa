use serde::{Deserialize, Serialize};

use super::tagger::{self, Pos};
use super::text::word_tokens;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub text: String,
    pub pos: Option<Pos>,
}

const ABBREVIATIONS: &[&str] = &[
    "e.g", "i.e", "etc", "vs", "mr", "mrs", "ms", "dr", "prof", "fig", "no", "approx", "cf", "al", "eq",
    "sec", "resp", "inc", "ltd",
];

/// Splits prose into sentences at `.`, `?` or `!` followed by whitespace or
/// end of text, and at blank lines. Abbreviations do not end a sentence.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let at_end = |j: usize| j + 1 >= bytes.len() || bytes[j + 1].is_ascii_whitespace();
        if matches!(b, b'.' | b'?' | b'!') && at_end(i) {
            if b != b'.' || !ends_with_abbreviation(&text[start..i]) {
                push_trimmed(&mut out, &text[start..=i]);
                start = i + 1;
            }
        } else if b == b'\n' && text[i + 1..].starts_with(['\n', '\r']) {
            push_trimmed(&mut out, &text[start..i]);
            start = i + 1;
        }
        i += 1;
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn push_trimmed<'a>(out: &mut Vec<&'a str>, s: &'a str) {
    let s = s.trim();
    if !s.is_empty() {
        out.push(s);
    }
}

fn ends_with_abbreviation(prefix: &str) -> bool {
    let last = prefix
        .rsplit(char::is_whitespace)
        .next()
        .unwrap_or("")
        .trim_start_matches(|c: char| !c.is_alphanumeric())
        .to_lowercase();
    ABBREVIATIONS.contains(&last.as_str())
}

/// Sentence segmentation followed by tokenization and coarse tagging.
/// Sentences without word tokens are dropped.
pub fn tokenize_natural(text: &str) -> Vec<Vec<TaggedToken>> {
    split_sentences(text)
        .into_iter()
        .filter_map(|s| {
            let tokens = word_tokens(s);
            if tokens.is_empty() {
                return None;
            }
            let tags = tagger::tag_tokens(&tokens);
            Some(
                tokens
                    .into_iter()
                    .zip(tags)
                    .map(|(text, pos)| TaggedToken { text, pos })
                    .collect(),
            )
        })
        .collect()
}
