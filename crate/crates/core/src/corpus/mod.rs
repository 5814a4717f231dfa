//! Dataset loading and artifact normalization.

pub mod code;
pub mod nl;
pub mod porter;
pub mod tagger;
pub mod text;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use code::{scan_code, CodeParts};
pub use nl::{tokenize_natural, TaggedToken};
pub use tagger::Pos;
pub use text::{normalize_token, preprocess, split_identifier, TermCounts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Source,
    Intermediate,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "nl", alias = "natural_language", alias = "text")]
    NaturalLanguage,
    #[serde(rename = "code")]
    Code,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub id: String,
    pub level: Level,
    pub kind: Kind,
    pub raw: String,
    /// Tagged sentences; empty for code.
    pub sentences: Vec<Vec<TaggedToken>>,
    /// Present exactly for code artifacts.
    pub code_parts: Option<CodeParts>,
}

impl Artifact {
    pub fn natural(id: impl Into<String>, level: Level, raw: impl Into<String>) -> Self {
        let raw = raw.into();
        Artifact {
            id: id.into(),
            level,
            kind: Kind::NaturalLanguage,
            sentences: tokenize_natural(&raw),
            raw,
            code_parts: None,
        }
    }

    pub fn code(id: impl Into<String>, level: Level, raw: impl Into<String>) -> Self {
        let raw = raw.into();
        Artifact {
            id: id.into(),
            level,
            kind: Kind::Code,
            code_parts: Some(scan_code(&raw)),
            raw,
            sentences: Vec::new(),
        }
    }

    pub fn from_parts(id: impl Into<String>, level: Level, parts: CodeParts) -> Self {
        Artifact {
            id: id.into(),
            level,
            kind: Kind::Code,
            raw: String::new(),
            sentences: Vec::new(),
            code_parts: Some(parts),
        }
    }

    /// The normalized document: all prose for natural language; comments
    /// plus declared identifiers for code.
    pub fn to_document(&self) -> Document {
        let terms = match (&self.kind, &self.code_parts) {
            (Kind::Code, Some(parts)) => {
                let mut tokens: Vec<&str> = Vec::new();
                for id in parts.document_identifiers() {
                    tokens.extend(id.iter().map(String::as_str));
                }
                for c in &parts.comments {
                    tokens.extend(c.iter().map(String::as_str));
                }
                preprocess(&tokens)
            }
            _ => {
                let tokens: Vec<&str> = self.sentences.iter().flatten().map(|t| t.text.as_str()).collect();
                preprocess(&tokens)
            }
        };
        Document::new(self.id.clone(), terms)
    }
}

/// A normalized document with optional biterm enrichment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub artifact_id: String,
    pub terms: TermCounts,
    /// Compound terms from the artifact's own biterms, weighted by importance.
    pub own_biterms: TermCounts,
    /// Compound terms contributed by related intermediates, weight one each.
    pub foreign_biterms: BTreeSet<String>,
}

impl Document {
    pub fn new(artifact_id: impl Into<String>, terms: TermCounts) -> Self {
        Document {
            artifact_id: artifact_id.into(),
            terms,
            own_biterms: TermCounts::new(),
            foreign_biterms: BTreeSet::new(),
        }
    }

    /// Added compound terms with their combined weights.
    pub fn added_biterm_terms(&self) -> TermCounts {
        let mut out = self.own_biterms.clone();
        for t in &self.foreign_biterms {
            *out.entry(t.clone()).or_insert(0) += 1;
        }
        out
    }

    /// Term frequencies used for indexing: base stems plus compound terms.
    pub fn weighted_terms(&self) -> TermCounts {
        let mut out = self.terms.clone();
        for (t, w) in self.added_biterm_terms() {
            *out.entry(t).or_insert(0) += w;
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.own_biterms.is_empty() && self.foreign_biterms.is_empty()
    }
}

pub type Link = (String, String);

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub sources: Vec<Artifact>,
    pub intermediates: Vec<Artifact>,
    pub targets: Vec<Artifact>,
    pub oracle_st: BTreeSet<Link>,
    pub oracle_si: Option<BTreeSet<Link>>,
    pub oracle_it: Option<BTreeSet<Link>>,
}

impl Dataset {
    pub fn artifacts(&self) -> impl Iterator<Item = &Artifact> {
        self.sources
            .iter()
            .chain(&self.intermediates)
            .chain(&self.targets)
    }

    pub fn ids(&self, level: Level) -> Vec<String> {
        let list = match level {
            Level::Source => &self.sources,
            Level::Intermediate => &self.intermediates,
            Level::Target => &self.targets,
        };
        list.iter().map(|a| a.id.clone()).collect()
    }

    pub fn artifact(&self, id: &str) -> Option<&Artifact> {
        self.artifacts().find(|a| a.id == id)
    }

    /// Checks id uniqueness and oracle referential integrity.
    pub fn validate(&self) -> Result<()> {
        let mut levels: BTreeMap<&str, Level> = BTreeMap::new();
        for a in self.artifacts() {
            if levels.insert(a.id.as_str(), a.level).is_some() {
                return Err(Error::Validation(format!("duplicate artifact id `{}`", a.id)));
            }
            match (a.kind, &a.code_parts, a.sentences.is_empty()) {
                (Kind::Code, Some(_), true) | (Kind::NaturalLanguage, None, _) => {}
                _ => {
                    return Err(Error::Validation(format!(
                        "artifact `{}` mixes code and prose content",
                        a.id
                    )))
                }
            }
        }
        let check = |name: &str, links: &BTreeSet<Link>, from: Level, to: Level| -> Result<()> {
            for (a, b) in links {
                for (id, want) in [(a, from), (b, to)] {
                    match levels.get(id.as_str()) {
                        Some(l) if *l == want => {}
                        Some(l) => {
                            return Err(Error::Validation(format!(
                                "{name} link ({a}, {b}): `{id}` is a {l:?} artifact, expected {want:?}"
                            )))
                        }
                        None => {
                            return Err(Error::Validation(format!(
                                "{name} link ({a}, {b}) references unknown id `{id}`"
                            )))
                        }
                    }
                }
            }
            Ok(())
        };
        check("oracle_st", &self.oracle_st, Level::Source, Level::Target)?;
        if let Some(l) = &self.oracle_si {
            check("oracle_si", l, Level::Source, Level::Intermediate)?;
        }
        if let Some(l) = &self.oracle_it {
            check("oracle_it", l, Level::Intermediate, Level::Target)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub path: PathBuf,
    pub kind: Kind,
}

/// On-disk dataset description. Paths are relative to the manifest file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub sources: Vec<ManifestEntry>,
    #[serde(default)]
    pub intermediates: Vec<ManifestEntry>,
    #[serde(default)]
    pub targets: Vec<ManifestEntry>,
    #[serde(default)]
    pub oracle_st: Vec<(String, String)>,
    #[serde(default)]
    pub oracle_si: Option<Vec<(String, String)>>,
    #[serde(default)]
    pub oracle_it: Option<Vec<(String, String)>>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read(path)
        .map(|b| String::from_utf8_lossy(&b).into_owned())
        .map_err(|source| Error::Load {
            path: path.to_owned(),
            source,
        })
}

/// Loads a dataset from a JSON manifest.
pub fn load_dataset(manifest_path: &Path) -> Result<Dataset> {
    let body = read_text(manifest_path)?;
    let manifest: Manifest = serde_json::from_str(&body).map_err(|source| Error::Json {
        path: manifest_path.to_owned(),
        source,
    })?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));

    let load_level = |entries: &[ManifestEntry], level: Level| -> Result<Vec<Artifact>> {
        entries
            .iter()
            .map(|e| {
                let raw = read_text(&base.join(&e.path))?;
                Ok(match e.kind {
                    Kind::NaturalLanguage => Artifact::natural(&e.id, level, raw),
                    Kind::Code => Artifact::code(&e.id, level, raw),
                })
            })
            .collect()
    };
    let to_set = |v: Vec<(String, String)>| v.into_iter().collect::<BTreeSet<_>>();

    let dataset = Dataset {
        sources: load_level(&manifest.sources, Level::Source)?,
        intermediates: load_level(&manifest.intermediates, Level::Intermediate)?,
        targets: load_level(&manifest.targets, Level::Target)?,
        oracle_st: to_set(manifest.oracle_st),
        oracle_si: manifest.oracle_si.map(to_set),
        oracle_it: manifest.oracle_it.map(to_set),
    };
    dataset.validate()?;
    Ok(dataset)
}

/// Ids present in a list of artifacts.
pub fn id_set(artifacts: &[Artifact]) -> HashSet<&str> {
    artifacts.iter().map(|a| a.id.as_str()).collect()
}
