//! Selection of highly related intermediates and biterm enrichment of
//! source and target documents.

use serde::{Deserialize, Serialize};

use crate::biterm::BitermSet;
use crate::corpus::{Document, TermCounts};
use crate::error::{Error, Result};
use crate::irmodels::SimilarityTable;

/// Relative threshold `m` and cap `t` shared by enrichment and link
/// selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnrichmentConfig {
    pub m: f64,
    pub t: usize,
}

impl Default for EnrichmentConfig {
    fn default() -> Self {
        EnrichmentConfig { m: 0.5, t: 3 }
    }
}

impl EnrichmentConfig {
    pub fn new(m: f64, t: usize) -> Result<Self> {
        let cfg = EnrichmentConfig { m, t };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0 && self.m <= 1.0) {
            return Err(Error::Config(format!(
                "threshold m = {} must be in (0, 1]",
                self.m
            )));
        }
        if self.t == 0 {
            return Err(Error::Config("cap t must be at least 1".into()));
        }
        Ok(())
    }
}

/// Sorts `(id, score)` by descending score (ascending id on ties) and keeps
/// at most `cap` entries scoring at least `ratio` times the best score.
/// Nothing is kept when the best score is zero.
pub fn select_within(mut scored: Vec<(String, f64)>, ratio: f64, cap: usize) -> Vec<(String, f64)> {
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let Some(max) = scored.first().map(|s| s.1) else {
        return Vec::new();
    };
    if max <= 0.0 {
        return Vec::new();
    }
    let cutoff = ratio * max;
    scored
        .into_iter()
        .take(cap)
        .take_while(|(_, s)| *s >= cutoff)
        .collect()
}

/// At most `t` intermediates whose similarity to `artifact` is at least
/// `m` times the best one.
pub fn select_related_intermediates(
    artifact: &str,
    intermediates: &[String],
    table: &SimilarityTable,
    cfg: &EnrichmentConfig,
) -> Result<Vec<String>> {
    let scored = intermediates
        .iter()
        .filter(|i| i.as_str() != artifact)
        .map(|i| Ok((i.clone(), table.get(artifact, i)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(select_within(scored, cfg.m, cfg.t)
        .into_iter()
        .map(|(id, _)| id)
        .collect())
}

/// Adds the artifact's own consensual biterms as compound terms weighted
/// by importance count.
pub fn with_own_biterms(doc: &Document, own: &BitermSet) -> Document {
    let mut out = doc.clone();
    for b in own.iter() {
        *out.own_biterms.entry(b.pair.compound_term()).or_insert(0) += b.count;
    }
    out
}

/// Adds every distinct biterm of the related intermediates once, with
/// weight one.
pub fn enrich_artifact(doc: &Document, related: &[&BitermSet]) -> Document {
    let mut out = doc.clone();
    for set in related {
        for pair in set.biterms.keys() {
            out.foreign_biterms.insert(pair.compound_term());
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct EnrichedEntry<'a> {
    pub artifact_id: &'a str,
    pub terms: &'a TermCounts,
    pub added_terms: TermCounts,
}

/// JSON dump of documents with their base and added compound terms.
pub fn enriched_dump(docs: &[Document]) -> serde_json::Value {
    let entries: Vec<EnrichedEntry> = docs
        .iter()
        .map(|d| EnrichedEntry {
            artifact_id: &d.artifact_id,
            terms: &d.terms,
            added_terms: d.added_biterm_terms(),
        })
        .collect();
    serde_json::to_value(entries).expect("serializable")
}
