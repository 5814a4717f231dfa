//! End-to-end run: biterm extraction, consensual filtering, enrichment,
//! similarity, ranking and transitive adjustment.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::biterm::{consensual_filter, extract_biterms, BitermSet, FilteredBiterms};
use crate::corpus::{Dataset, Document, Level};
use crate::enrich::{enrich_artifact, select_related_intermediates, with_own_biterms, EnrichmentConfig};
use crate::error::{Error, Result};
use crate::irmodels::{build_table, rank_candidates, Model, RankedList, SimilarityTable};
use crate::transitive::{adjust_scores, form_paths, TransitivePath};

/// Which parts of the approach are switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "ir-only")]
    IrOnly,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "o")]
    O,
    #[serde(rename = "b+o")]
    BO,
    #[serde(rename = "o+i")]
    OI,
    #[serde(rename = "b+o+i")]
    BOI,
}

impl Mode {
    pub const ALL: [Mode; 6] = [Mode::IrOnly, Mode::B, Mode::O, Mode::BO, Mode::OI, Mode::BOI];

    pub fn enrichment(self) -> bool {
        matches!(self, Mode::B | Mode::BO | Mode::BOI)
    }

    pub fn outer(self) -> bool {
        matches!(self, Mode::O | Mode::BO | Mode::OI | Mode::BOI)
    }

    pub fn inner(self) -> bool {
        matches!(self, Mode::OI | Mode::BOI)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::IrOnly => "ir-only",
            Mode::B => "b",
            Mode::O => "o",
            Mode::BO => "b+o",
            Mode::OI => "o+i",
            Mode::BOI => "b+o+i",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim())
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown mode `{s}` (expected one of ir-only, b, o, b+o, o+i, b+o+i)"
                ))
            })
    }
}

/// Parses a comma-separated mode list, keeping the given order and dropping
/// repeats.
pub fn parse_modes(list: &str) -> Result<Vec<Mode>> {
    let mut modes = Vec::new();
    for part in list.split(',').filter(|p| !p.trim().is_empty()) {
        let m: Mode = part.parse()?;
        if !modes.contains(&m) {
            modes.push(m);
        }
    }
    if modes.is_empty() {
        return Err(Error::Config("no ablation modes given".into()));
    }
    Ok(modes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub model: Model,
    pub mode: Mode,
    pub enrichment: EnrichmentConfig,
    pub lsi_rank: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            model: Model::Vsm,
            mode: Mode::BOI,
            enrichment: EnrichmentConfig::default(),
            lsi_rank: None,
        }
    }
}

/// Mode-independent work shared by every run over one dataset.
#[derive(Debug, Clone)]
pub struct Prepared<'a> {
    pub dataset: &'a Dataset,
    pub base_documents: Vec<Document>,
    pub filtered: FilteredBiterms,
}

impl<'a> Prepared<'a> {
    pub fn new(dataset: &'a Dataset, pairs_dir: Option<&Path>) -> Result<Self> {
        let extract = |level: &[crate::corpus::Artifact]| -> Result<Vec<BitermSet>> {
            level
                .iter()
                .map(|a| extract_biterms(a, pairs_dir).map_err(|e| e.in_stage("extract", Some(&a.id))))
                .collect()
        };
        let s = extract(&dataset.sources)?;
        let i = extract(&dataset.intermediates)?;
        let t = extract(&dataset.targets)?;
        Ok(Prepared {
            dataset,
            base_documents: dataset.artifacts().map(|a| a.to_document()).collect(),
            filtered: consensual_filter(&s, &i, &t),
        })
    }

    fn own(&self, id: &str) -> Option<&BitermSet> {
        self.filtered
            .sources
            .iter()
            .chain(&self.filtered.intermediates)
            .chain(&self.filtered.targets)
            .find(|b| b.artifact_id == id)
    }

    fn intermediate(&self, id: &str) -> Option<&BitermSet> {
        self.filtered.intermediates.iter().find(|b| b.artifact_id == id)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub mode: Mode,
    /// Documents the final similarity table was built from.
    pub documents: Vec<Document>,
    /// Intermediates each source and target was enriched from.
    pub related: BTreeMap<String, Vec<String>>,
    /// Similarities on Step-1 documents that drove the enrichment choice.
    pub pre_table: Option<SimilarityTable>,
    pub table: SimilarityTable,
    /// IR scores before transitive adjustment.
    pub ir_ranking: Vec<RankedList>,
    pub paths: Vec<TransitivePath>,
    pub ranking: Vec<RankedList>,
}

pub fn run(prepared: &Prepared, cfg: &PipelineConfig) -> Result<RunOutput> {
    cfg.enrichment.validate()?;
    let ds = prepared.dataset;
    let sources = ds.ids(Level::Source);
    let intermediates = ds.ids(Level::Intermediate);
    let targets = ds.ids(Level::Target);
    let table_of = |docs: &[Document]| {
        build_table(cfg.model, docs, cfg.lsi_rank).map_err(|e| e.in_stage("similarity", None))
    };

    let mut related = BTreeMap::new();
    let mut pre_table = None;
    let documents = if cfg.mode.enrichment() {
        let step1: Vec<Document> = prepared
            .base_documents
            .iter()
            .map(|d| match prepared.own(&d.artifact_id) {
                Some(own) => with_own_biterms(d, own),
                None => d.clone(),
            })
            .collect();
        let pre = pre_table.insert(table_of(&step1)?);
        step1
            .iter()
            .map(|d| {
                let level = ds.artifact(&d.artifact_id).map(|a| a.level);
                if level == Some(Level::Intermediate) {
                    return Ok(d.clone());
                }
                let picks =
                    select_related_intermediates(&d.artifact_id, &intermediates, pre, &cfg.enrichment)
                        .map_err(|e| e.in_stage("enrich", Some(&d.artifact_id)))?;
                let sets: Vec<&BitermSet> = picks.iter().filter_map(|i| prepared.intermediate(i)).collect();
                let out = enrich_artifact(d, &sets);
                related.insert(d.artifact_id.clone(), picks);
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        prepared.base_documents.clone()
    };

    let table = table_of(&documents)?;
    let ir_ranking = rank_candidates(&table, &sources, &targets).map_err(|e| e.in_stage("rank", None))?;
    let mut paths = Vec::new();
    if cfg.mode.outer() {
        for s in &sources {
            paths.extend(
                form_paths(s, ds, &table, &cfg.enrichment, cfg.mode.inner())
                    .map_err(|e| e.in_stage("paths", Some(s)))?,
            );
        }
    }
    let ranking = adjust_scores(&ir_ranking, &paths);
    Ok(RunOutput {
        mode: cfg.mode,
        documents,
        related,
        pre_table,
        table,
        ir_ranking,
        paths,
        ranking,
    })
}

/// Filtered biterms of every artifact as `{id: {"a b": count}}`.
pub fn biterms_json(filtered: &FilteredBiterms) -> serde_json::Value {
    let map: BTreeMap<&str, BTreeMap<String, u32>> = filtered
        .sources
        .iter()
        .chain(&filtered.intermediates)
        .chain(&filtered.targets)
        .map(|b| (b.artifact_id.as_str(), b.to_json_map()))
        .collect();
    serde_json::to_value(map).expect("serializable")
}
