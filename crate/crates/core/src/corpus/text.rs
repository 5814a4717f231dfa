use std::collections::{BTreeMap, HashSet};
use std::sync::OnceLock;

use super::porter;

/// Multiset of terms, ordered for deterministic iteration.
pub type TermCounts = BTreeMap<String, u32>;

const STOPWORDS_TXT: &str = include_str!("stopwords.txt");

fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORDS_TXT
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect()
    })
}

pub fn is_stopword(word: &str) -> bool {
    stopwords().contains(word)
}

/// Maximal runs of letters and digits. Everything else separates tokens.
pub fn word_tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Lower,
    Upper,
    Digit,
    Other,
}

fn class_of(c: char) -> CharClass {
    if c.is_lowercase() {
        CharClass::Lower
    } else if c.is_uppercase() {
        CharClass::Upper
    } else if c.is_numeric() {
        CharClass::Digit
    } else if c.is_alphabetic() {
        // caseless scripts behave like lowercase
        CharClass::Lower
    } else {
        CharClass::Other
    }
}

/// Splits a programming identifier on camelCase, snake_case and letter/digit
/// boundaries. A run of capitals stays together until a lowercase letter
/// follows, in which case the last capital opens the next token
/// (`AFInfoBox` -> `af`, `info`, `box`).
pub fn split_identifier(identifier: &str) -> Vec<String> {
    let chars: Vec<char> = identifier.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();

    for (i, &c) in chars.iter().enumerate() {
        let cls = class_of(c);
        if cls == CharClass::Other {
            flush(&mut current, &mut tokens);
            continue;
        }
        if let Some(&prev) = i.checked_sub(1).and_then(|p| chars.get(p)) {
            let prev_cls = class_of(prev);
            let boundary = match (prev_cls, cls) {
                (CharClass::Lower, CharClass::Upper) => true,
                (CharClass::Digit, CharClass::Lower | CharClass::Upper) => true,
                (CharClass::Lower | CharClass::Upper, CharClass::Digit) => true,
                (CharClass::Upper, CharClass::Upper) => chars
                    .get(i + 1)
                    .is_some_and(|&next| class_of(next) == CharClass::Lower),
                _ => false,
            };
            if boundary {
                flush(&mut current, &mut tokens);
            }
        }
        current.extend(c.to_lowercase());
    }
    flush(&mut current, &mut tokens);
    tokens
}

fn flush(current: &mut String, tokens: &mut Vec<String>) {
    if !current.is_empty() {
        tokens.push(std::mem::take(current));
    }
}

/// Porter stem applied until it stops changing, so preprocessing is
/// idempotent on its own output.
fn stable_stem(word: &str) -> String {
    let mut cur = porter::stem(word);
    for _ in 0..8 {
        let next = porter::stem(&cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

/// Normalizes one raw token into a stem, or `None` when the token is a
/// special token (punctuation, numerals, single characters) or a stopword.
pub fn normalize_token(token: &str) -> Option<String> {
    if token.is_empty() || !token.chars().all(char::is_alphanumeric) {
        return None;
    }
    if !token.chars().any(char::is_alphabetic) {
        return None;
    }
    let lower = token.to_lowercase();
    if lower.chars().count() < 2 || is_stopword(&lower) {
        return None;
    }
    let stem = stable_stem(&lower);
    if stem.chars().count() < 2 || is_stopword(&stem) {
        return None;
    }
    Some(stem)
}

/// Special-token removal, lowercasing, stopword removal and Porter stemming.
pub fn preprocess<S: AsRef<str>>(tokens: &[S]) -> TermCounts {
    let mut out = TermCounts::new();
    for t in tokens {
        if let Some(stem) = normalize_token(t.as_ref()) {
            *out.entry(stem).or_insert(0) += 1;
        }
    }
    out
}

/// Flattens a multiset back into a token list (each term repeated by count).
pub fn expand(counts: &TermCounts) -> Vec<String> {
    counts
        .iter()
        .flat_map(|(t, &n)| std::iter::repeat_n(t.clone(), n as usize))
        .collect()
}
