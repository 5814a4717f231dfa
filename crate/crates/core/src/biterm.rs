//! Biterm extraction, importance counting and intermediate-centric
//! consensual filtering.
//!
//! A biterm is an unordered pair of distinct stems, stored with the
//! lexicographically smaller stem first so that pairs found in prose and in
//! code match regardless of the order they were seen in.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{normalize_token, tagger, Artifact, CodeParts, Kind};
use crate::error::{Error, Result};

/// Canonical unordered stem pair, `0 < 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StemPair(String, String);

impl StemPair {
    /// Orders the two stems; `None` for a self-pair.
    pub fn new(x: impl Into<String>, y: impl Into<String>) -> Option<Self> {
        let (x, y) = (x.into(), y.into());
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Some(StemPair(x, y)),
            std::cmp::Ordering::Greater => Some(StemPair(y, x)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn first(&self) -> &str {
        &self.0
    }

    pub fn second(&self) -> &str {
        &self.1
    }

    /// Single vocabulary term standing for the biterm, e.g. `assign_rout`.
    pub fn compound_term(&self) -> String {
        format!("{}_{}", self.0, self.1)
    }
}

impl std::fmt::Display for StemPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Biterm {
    pub pair: StemPair,
    pub count: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitermSet {
    pub artifact_id: String,
    pub biterms: BTreeMap<StemPair, u32>,
}

impl BitermSet {
    pub fn new(artifact_id: impl Into<String>) -> Self {
        BitermSet {
            artifact_id: artifact_id.into(),
            biterms: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, pair: StemPair, count: u32) {
        if count > 0 {
            *self.biterms.entry(pair).or_insert(0) += count;
        }
    }

    pub fn count(&self, a: &str, b: &str) -> u32 {
        StemPair::new(a, b)
            .and_then(|p| self.biterms.get(&p).copied())
            .unwrap_or(0)
    }

    pub fn contains(&self, pair: &StemPair) -> bool {
        self.biterms.contains_key(pair)
    }

    pub fn len(&self) -> usize {
        self.biterms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.biterms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Biterm> + '_ {
        self.biterms.iter().map(|(p, &c)| Biterm {
            pair: p.clone(),
            count: c,
        })
    }

    /// JSON debugging surface: `"a b" -> count`.
    pub fn to_json_map(&self) -> BTreeMap<String, u32> {
        self.biterms.iter().map(|(p, &c)| (p.to_string(), c)).collect()
    }
}

/// Pairs of content tokens within a window of three, after dropping tokens
/// that are not nouns, verbs or adjectives. One entry per occurrence.
fn windowed_pairs<S: AsRef<str>>(tokens: &[S], tags: &[Option<tagger::Pos>]) -> Vec<StemPair> {
    const WINDOW: usize = 3;
    let stems: Vec<Option<String>> = tokens
        .iter()
        .zip(tags)
        .filter(|(_, tag)| tag.is_some_and(|p| p.is_content()))
        .map(|(t, _)| normalize_token(t.as_ref()))
        .collect();
    let mut out = Vec::new();
    for i in 0..stems.len() {
        for j in i + 1..stems.len().min(i + WINDOW) {
            if let (Some(a), Some(b)) = (&stems[i], &stems[j]) {
                if let Some(p) = StemPair::new(a.clone(), b.clone()) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Heuristic grammatical pairs from a natural-language artifact; counts are
/// occurrences over the whole artifact.
pub fn extract_nl_biterms(artifact: &Artifact) -> BitermSet {
    let mut set = BitermSet::new(&artifact.id);
    for sentence in &artifact.sentences {
        let tokens: Vec<&str> = sentence.iter().map(|t| t.text.as_str()).collect();
        let tags: Vec<_> = sentence.iter().map(|t| t.pos).collect();
        for p in windowed_pairs(&tokens, &tags) {
            set.add(p, 1);
        }
    }
    set
}

/// Dependency labels whose head/dependent pairs become biterms. Subtypes
/// (`nmod:of`, `nsubj:pass`) are matched on the part before the colon.
const ACCEPTED_LABELS: &[&str] = &[
    "nsubj",
    "nsubjpass",
    "csubj",
    "csubjpass",
    "agent",
    "obj",
    "dobj",
    "iobj",
    "pobj",
    "obl",
    "amod",
    "nmod",
    "compound",
    "nn",
    "acl",
    "advmod",
    "appos",
];

fn label_accepted(label: &str) -> bool {
    let base = label.split(':').next().unwrap_or(label);
    ACCEPTED_LABELS.contains(&base.to_ascii_lowercase().as_str())
}

/// Imports externally parsed grammatical pairs, one `label<TAB>term1<TAB>term2`
/// record per line. Blank lines and `#` comments are ignored.
pub fn import_parsed_pairs(artifact_id: &str, pairs_file: &Path) -> Result<BitermSet> {
    let body = fs::read_to_string(pairs_file).map_err(|source| Error::Load {
        path: pairs_file.to_owned(),
        source,
    })?;
    let mut set = BitermSet::new(artifact_id);
    for (n, line) in body.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [label, t1, t2] = fields.as_slice() else {
            return Err(Error::Parse {
                path: pairs_file.to_owned(),
                line: n + 1,
                message: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        };
        if t1.is_empty() || t2.is_empty() || label.is_empty() {
            return Err(Error::Parse {
                path: pairs_file.to_owned(),
                line: n + 1,
                message: "empty field".into(),
            });
        }
        if !label_accepted(label) {
            continue;
        }
        let eligible = |t: &str| tagger::tag_word(t).is_some_and(|p| p.is_content());
        if !eligible(t1) || !eligible(t2) {
            continue;
        }
        if let (Some(a), Some(b)) = (normalize_token(t1), normalize_token(t2)) {
            if let Some(p) = StemPair::new(a, b) {
                set.add(p, 1);
            }
        }
    }
    Ok(set)
}

/// Distinct pairs formed from one identifier's split tokens.
fn identifier_pairs(tokens: &[String]) -> BTreeSet<StemPair> {
    let stems: Vec<String> = tokens.iter().filter_map(|t| normalize_token(t)).collect();
    let mut out = BTreeSet::new();
    for i in 0..stems.len() {
        for j in i + 1..stems.len() {
            if let Some(p) = StemPair::new(stems[i].clone(), stems[j].clone()) {
                out.insert(p);
            }
        }
    }
    out
}

/// Biterms from code parts with importance counts: two per occurrence in a
/// class or method name, one per occurrence in a comment, and a single one
/// if the biterm occurs anywhere in invoked method, field or parameter names
/// and types.
pub fn code_biterms(artifact_id: &str, parts: &CodeParts) -> BitermSet {
    let mut set = BitermSet::new(artifact_id);
    for id in parts.class_names.iter().chain(&parts.method_names) {
        for p in identifier_pairs(id) {
            set.add(p, 2);
        }
    }
    for comment in &parts.comments {
        let tags = tagger::tag_tokens(comment);
        for p in windowed_pairs(comment, &tags) {
            set.add(p, 1);
        }
    }
    let mut flat: BTreeSet<StemPair> = BTreeSet::new();
    for id in parts
        .invoked_method_names
        .iter()
        .chain(&parts.field_type_names)
        .chain(&parts.field_names)
        .chain(&parts.parameter_type_names)
        .chain(&parts.parameter_names)
    {
        flat.extend(identifier_pairs(id));
    }
    for p in flat {
        set.add(p, 1);
    }
    set
}

pub fn extract_code_biterms(artifact: &Artifact) -> BitermSet {
    match &artifact.code_parts {
        Some(parts) => code_biterms(&artifact.id, parts),
        None => BitermSet::new(&artifact.id),
    }
}

/// Per-kind extraction. For prose, a `<id>.pairs` file under `pairs_dir`
/// replaces the heuristic pairing.
pub fn extract_biterms(artifact: &Artifact, pairs_dir: Option<&Path>) -> Result<BitermSet> {
    match artifact.kind {
        Kind::Code => Ok(extract_code_biterms(artifact)),
        Kind::NaturalLanguage => {
            if let Some(dir) = pairs_dir {
                let file = dir.join(format!("{}.pairs", artifact.id));
                if file.is_file() {
                    return import_parsed_pairs(&artifact.id, &file);
                }
            }
            Ok(extract_nl_biterms(artifact))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilteredBiterms {
    pub sources: Vec<BitermSet>,
    pub intermediates: Vec<BitermSet>,
    pub targets: Vec<BitermSet>,
}

/// Keeps source and target biterms that some intermediate also has, and
/// intermediate biterms that some source or target also has. Counts are
/// left as extracted.
pub fn consensual_filter(
    sources: &[BitermSet],
    intermediates: &[BitermSet],
    targets: &[BitermSet],
) -> FilteredBiterms {
    let in_intermediates: BTreeSet<&StemPair> = intermediates.iter().flat_map(|s| s.biterms.keys()).collect();
    let in_ends: BTreeSet<&StemPair> = sources
        .iter()
        .chain(targets)
        .flat_map(|s| s.biterms.keys())
        .collect();

    let retain = |sets: &[BitermSet], universe: &BTreeSet<&StemPair>| -> Vec<BitermSet> {
        sets.iter()
            .map(|s| BitermSet {
                artifact_id: s.artifact_id.clone(),
                biterms: s
                    .biterms
                    .iter()
                    .filter(|(p, _)| universe.contains(p))
                    .map(|(p, &c)| (p.clone(), c))
                    .collect(),
            })
            .collect()
    };

    FilteredBiterms {
        sources: retain(sources, &in_intermediates),
        intermediates: retain(intermediates, &in_ends),
        targets: retain(targets, &in_intermediates),
    }
}
