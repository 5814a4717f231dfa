use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SimilarityTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub target: String,
    pub score: f64,
}

/// Targets for one source, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub source: String,
    pub candidates: Vec<Candidate>,
}

impl RankedList {
    /// Sorts by descending score, ascending target id on ties.
    pub fn sort(&mut self) {
        self.candidates
            .sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.target.cmp(&b.target)));
    }

    pub fn position(&self, target: &str) -> Option<usize> {
        self.candidates.iter().position(|c| c.target == target)
    }

    pub fn score(&self, target: &str) -> Option<f64> {
        self.candidates
            .iter()
            .find(|c| c.target == target)
            .map(|c| c.score)
    }
}

pub fn rank_candidates(
    table: &SimilarityTable,
    sources: &[String],
    targets: &[String],
) -> Result<Vec<RankedList>> {
    sources
        .iter()
        .map(|s| {
            let candidates = targets
                .iter()
                .map(|t| {
                    Ok(Candidate {
                        target: t.clone(),
                        score: table.get(s, t)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut list = RankedList {
                source: s.clone(),
                candidates,
            };
            list.sort();
            Ok(list)
        })
        .collect()
}

/// `source_id,target_id,score` rows ordered by source id, then descending
/// score, then target id, with six decimals.
pub fn write_ranked_csv<W: Write>(out: &mut W, lists: &[RankedList]) -> std::io::Result<()> {
    writeln!(out, "source_id,target_id,score")?;
    let mut ordered: Vec<&RankedList> = lists.iter().collect();
    ordered.sort_by(|a, b| a.source.cmp(&b.source));
    for list in ordered {
        let mut l = list.clone();
        l.sort();
        for c in &l.candidates {
            writeln!(out, "{},{},{:.6}", list.source, c.target, c.score)?;
        }
    }
    Ok(())
}

/// Reads a file written by [`write_ranked_csv`] back into sorted lists.
pub fn read_ranked_csv(path: &Path) -> Result<Vec<RankedList>> {
    let body = std::fs::read_to_string(path).map_err(|source| Error::Load {
        path: path.to_owned(),
        source,
    })?;
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_owned(),
        line,
        message,
    };
    let mut lines = body.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "source_id,target_id,score" => {}
        _ => return Err(parse_err(1, "expected header `source_id,target_id,score`".into())),
    }
    let mut by_source: BTreeMap<String, Vec<Candidate>> = BTreeMap::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [source, target, score] = fields[..] else {
            return Err(parse_err(
                i + 1,
                format!("expected 3 fields, found {}", fields.len()),
            ));
        };
        let score: f64 = score
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite())
            .ok_or_else(|| parse_err(i + 1, format!("bad score `{score}`")))?;
        if source.is_empty() || target.is_empty() {
            return Err(parse_err(i + 1, "empty artifact id".into()));
        }
        by_source.entry(source.to_owned()).or_default().push(Candidate {
            target: target.to_owned(),
            score,
        });
    }
    Ok(by_source
        .into_iter()
        .map(|(source, candidates)| {
            let mut l = RankedList { source, candidates };
            l.sort();
            l
        })
        .collect())
}
