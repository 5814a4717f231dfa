//! Coarse part-of-speech tagger: closed-class lexicon, a small open-class
//! lexicon, suffix rules, and one context rule (the word after a modal or
//! infinitival "to" is a verb).

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Other,
}

impl Pos {
    /// Nouns, verbs and adjectives may form biterms.
    pub fn is_content(self) -> bool {
        matches!(self, Pos::Noun | Pos::Verb | Pos::Adjective)
    }
}

const CLOSED_CLASS: &[&str] = &[
    // determiners and quantifiers
    "a",
    "an",
    "the",
    "this",
    "that",
    "these",
    "those",
    "each",
    "every",
    "any",
    "some",
    "all",
    "both",
    "either",
    "neither",
    "no",
    "another",
    "such",
    "which",
    "what",
    "whose",
    "whatever",
    // pronouns
    "i",
    "me",
    "my",
    "mine",
    "we",
    "us",
    "our",
    "ours",
    "you",
    "your",
    "yours",
    "he",
    "him",
    "his",
    "she",
    "her",
    "hers",
    "it",
    "its",
    "they",
    "them",
    "their",
    "theirs",
    "who",
    "whom",
    "itself",
    "themselves",
    "himself",
    "herself",
    "ourselves",
    "yourself",
    "one",
    // prepositions
    "of",
    "in",
    "on",
    "at",
    "by",
    "for",
    "with",
    "from",
    "to",
    "into",
    "onto",
    "upon",
    "about",
    "above",
    "below",
    "over",
    "under",
    "between",
    "among",
    "through",
    "during",
    "before",
    "after",
    "against",
    "within",
    "without",
    "via",
    "per",
    "across",
    "along",
    "around",
    "toward",
    "towards",
    "off",
    "out",
    "up",
    "down",
    "than",
    "like",
    "unlike",
    "until",
    "since",
    // conjunctions
    "and",
    "or",
    "but",
    "nor",
    "so",
    "yet",
    "if",
    "then",
    "else",
    "when",
    "while",
    "whereas",
    "because",
    "although",
    "though",
    "unless",
    "whether",
    "once",
    "where",
    "how",
    "why",
    // auxiliaries and modals
    "be",
    "is",
    "am",
    "are",
    "was",
    "were",
    "been",
    "being",
    "do",
    "does",
    "did",
    "done",
    "have",
    "has",
    "had",
    "having",
    "can",
    "could",
    "shall",
    "should",
    "will",
    "would",
    "may",
    "might",
    "must",
    "ought",
    // common adverbs and particles
    "not",
    "also",
    "only",
    "just",
    "very",
    "too",
    "more",
    "most",
    "less",
    "least",
    "much",
    "many",
    "few",
    "there",
    "here",
    "now",
    "already",
    "always",
    "never",
    "often",
    "again",
    "still",
    "even",
    "as",
    "well",
    "however",
    "therefore",
    "thus",
    "e",
    "g",
    "etc",
    "ie",
];

const MODALS: &[&str] = &[
    "can", "could", "shall", "should", "will", "would", "may", "might", "must", "to",
];

const VERBS: &[&str] = &[
    "select",
    "assign",
    "apply",
    "allow",
    "show",
    "display",
    "send",
    "receive",
    "create",
    "delete",
    "remove",
    "update",
    "add",
    "provide",
    "support",
    "load",
    "save",
    "store",
    "read",
    "write",
    "compute",
    "calculate",
    "check",
    "validate",
    "verify",
    "notify",
    "request",
    "return",
    "start",
    "stop",
    "run",
    "execute",
    "manage",
    "handle",
    "register",
    "connect",
    "open",
    "close",
    "set",
    "get",
    "view",
    "edit",
    "track",
    "monitor",
    "control",
    "launch",
    "land",
    "fly",
    "hover",
    "activate",
    "cancel",
    "log",
    "report",
    "enable",
    "disable",
    "accept",
    "reject",
    "generate",
    "parse",
    "render",
    "process",
    "use",
    "make",
    "take",
    "give",
    "keep",
    "let",
    "include",
    "contain",
    "define",
    "specify",
    "maintain",
    "ensure",
    "perform",
    "trigger",
    "plan",
    "change",
    "modify",
    "find",
    "search",
    "list",
    "sort",
    "filter",
    "print",
    "transmit",
    "upload",
    "download",
    "configure",
    "initialize",
    "inform",
    "alert",
    "warn",
    "respond",
    "issue",
];

const ADJECTIVES: &[&str] = &[
    "available",
    "new",
    "old",
    "current",
    "active",
    "valid",
    "invalid",
    "safe",
    "unsafe",
    "emergency",
    "main",
    "high",
    "low",
    "large",
    "small",
    "long",
    "short",
    "last",
    "first",
    "next",
    "previous",
    "single",
    "multiple",
    "same",
    "different",
    "real",
    "virtual",
    "physical",
    "manual",
    "automatic",
    "local",
    "remote",
    "global",
    "public",
    "private",
    "empty",
    "full",
    "default",
    "specific",
    "selected",
    "assigned",
    "unique",
    "secure",
    "fast",
    "slow",
];

const NOUNS: &[&str] = &[
    "user",
    "system",
    "uav",
    "drone",
    "route",
    "list",
    "operation",
    "flight",
    "information",
    "data",
    "message",
    "status",
    "mode",
    "map",
    "plan",
    "design",
    "requirement",
    "component",
    "box",
    "icon",
    "panel",
    "button",
    "window",
    "screen",
    "server",
    "client",
    "file",
    "record",
    "time",
    "position",
    "location",
    "command",
    "event",
    "error",
    "state",
    "group",
    "type",
    "name",
    "value",
    "field",
    "class",
    "method",
    "object",
    "interface",
    "level",
    "case",
    "test",
    "code",
    "info",
    "resource",
    "manager",
    "service",
    "view",
    "model",
    "controller",
    "vehicle",
    "pilot",
    "operator",
    "mission",
    "waypoint",
    "area",
    "zone",
    "battery",
    "speed",
    "altitude",
];

fn lookup(list: &[&str], w: &str) -> bool {
    list.contains(&w)
}

/// Tags a single word without context.
pub fn tag_word(word: &str) -> Option<Pos> {
    if word.is_empty() || !word.chars().any(char::is_alphabetic) {
        return None;
    }
    let w = word.to_lowercase();
    if lookup(CLOSED_CLASS, &w) {
        return Some(Pos::Other);
    }
    if lookup(NOUNS, &w) {
        return Some(Pos::Noun);
    }
    if lookup(VERBS, &w) {
        return Some(Pos::Verb);
    }
    if lookup(ADJECTIVES, &w) {
        return Some(Pos::Adjective);
    }
    Some(by_suffix(&w))
}

fn by_suffix(w: &str) -> Pos {
    let n = w.chars().count();
    if n <= 2 {
        return Pos::Noun;
    }
    // irregular plurals and inflections of lexicon entries
    if let Some(base) = w.strip_suffix('s') {
        if lookup(VERBS, base) || lookup(NOUNS, base) {
            return if lookup(NOUNS, base) { Pos::Noun } else { Pos::Verb };
        }
    }
    if w.ends_with("ly") {
        return Pos::Other;
    }
    if w.ends_with("ing") || w.ends_with("ed") || w.ends_with("ize") || w.ends_with("ise") {
        return Pos::Verb;
    }
    const ADJ: &[&str] = &[
        "able", "ible", "al", "ous", "ive", "ful", "less", "ic", "ary", "ant", "ent",
    ];
    if ADJ.iter().any(|s| w.ends_with(s)) {
        return Pos::Adjective;
    }
    Pos::Noun
}

/// Tags a token sequence. Tokens without letters get no tag.
pub fn tag_tokens<S: AsRef<str>>(tokens: &[S]) -> Vec<Option<Pos>> {
    let mut tags: Vec<Option<Pos>> = tokens.iter().map(|t| tag_word(t.as_ref())).collect();
    for i in 1..tokens.len() {
        let prev = tokens[i - 1].as_ref().to_lowercase();
        if MODALS.contains(&prev.as_str()) && matches!(tags[i], Some(Pos::Noun)) {
            tags[i] = Some(Pos::Verb);
        }
    }
    tags
}
