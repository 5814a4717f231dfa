//! Term-document matrices and pairwise similarity under VSM, LSI and JS.

mod js;
mod lsi;
mod rank;
mod vsm;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};

pub use js::{jensen_shannon_divergence, similarity_js};
pub use lsi::{default_rank, similarity_lsi, thin_svd, LsiSpace, Svd};
pub use rank::{rank_candidates, read_ranked_csv, write_ranked_csv, Candidate, RankedList};
pub use vsm::{cosine, similarity_vsm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Vsm,
    Lsi,
    Js,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Vsm => "vsm",
            Model::Lsi => "lsi",
            Model::Js => "js",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vsm" => Ok(Model::Vsm),
            "lsi" => Ok(Model::Lsi),
            "js" | "jsd" => Ok(Model::Js),
            other => Err(Error::Config(format!("unknown model `{other}` (vsm, lsi, js)"))),
        }
    }
}

/// tf-idf weighted term-by-document matrix, stored one dense column per
/// document. `tf` is the raw count (compound biterm weights included) and
/// `idf = ln(N / df)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TermDocMatrix {
    pub vocabulary: Vec<String>,
    pub doc_ids: Vec<String>,
    pub idf: Vec<f64>,
    /// `columns[d][t]` is the weight of term `t` in document `d`.
    pub columns: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
}

impl TermDocMatrix {
    pub fn doc_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Lookup(id.to_owned()))
    }

    pub fn column(&self, id: &str) -> Result<&[f64]> {
        Ok(&self.columns[self.doc_index(id)?])
    }

    pub fn n_terms(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }
}

pub fn build_matrix(documents: &[Document]) -> Result<TermDocMatrix> {
    if documents.is_empty() {
        return Err(Error::Build("no documents to index".into()));
    }
    let mut index = HashMap::new();
    for (i, d) in documents.iter().enumerate() {
        if index.insert(d.artifact_id.clone(), i).is_some() {
            return Err(Error::Build(format!("duplicate document id `{}`", d.artifact_id)));
        }
    }
    let weighted: Vec<_> = documents.iter().map(Document::weighted_terms).collect();
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for w in &weighted {
        for (t, &c) in w {
            if c > 0 {
                *df.entry(t.as_str()).or_insert(0) += 1;
            }
        }
    }
    if df.is_empty() {
        return Err(Error::Build("empty vocabulary: every document is empty".into()));
    }
    let vocabulary: Vec<String> = df.keys().map(|t| t.to_string()).collect();
    let term_index: HashMap<&str, usize> = vocabulary
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();
    let n = documents.len() as f64;
    let idf: Vec<f64> = df.values().map(|&d| (n / d as f64).ln()).collect();
    let columns = weighted
        .iter()
        .map(|w| {
            let mut col = vec![0.0; vocabulary.len()];
            for (t, &c) in w {
                let ti = term_index[t.as_str()];
                col[ti] = c as f64 * idf[ti];
            }
            col
        })
        .collect();
    Ok(TermDocMatrix {
        vocabulary,
        doc_ids: documents.iter().map(|d| d.artifact_id.clone()).collect(),
        idf,
        columns,
        index,
    })
}

/// Symmetric similarity scores over a document set, clamped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityTable {
    pub model: Model,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    scores: Vec<f64>,
}

impl SimilarityTable {
    pub fn new(model: Model, ids: Vec<String>) -> Self {
        let n = ids.len();
        let index = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        SimilarityTable {
            model,
            ids,
            index,
            scores: vec![0.0; n * n],
        }
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    fn idx(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Lookup(id.to_owned()))
    }

    /// Stores `score(a, b) = score(b, a)`, clamped to `[0, 1]`.
    pub fn set(&mut self, a: &str, b: &str, score: f64) -> Result<()> {
        let (i, j) = (self.idx(a)?, self.idx(b)?);
        let n = self.ids.len();
        let s = if score.is_nan() {
            0.0
        } else {
            score.clamp(0.0, 1.0)
        };
        self.scores[i * n + j] = s;
        self.scores[j * n + i] = s;
        Ok(())
    }

    pub fn get(&self, a: &str, b: &str) -> Result<f64> {
        let (i, j) = (self.idx(a)?, self.idx(b)?);
        Ok(self.scores[i * self.ids.len() + j])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }
}

/// Computes all pairwise similarities among `documents` under `model`.
/// `lsi_rank` defaults to [`default_rank`].
pub fn build_table(model: Model, documents: &[Document], lsi_rank: Option<usize>) -> Result<SimilarityTable> {
    let ids: Vec<String> = documents.iter().map(|d| d.artifact_id.clone()).collect();
    let mut table = SimilarityTable::new(model, ids.clone());
    match model {
        Model::Vsm => {
            let m = build_matrix(documents)?;
            for i in 0..ids.len() {
                for j in i..ids.len() {
                    table.set(&ids[i], &ids[j], cosine(&m.columns[i], &m.columns[j]))?;
                }
            }
        }
        Model::Lsi => {
            let m = build_matrix(documents)?;
            let k = lsi_rank.unwrap_or_else(|| default_rank(&m));
            let space = LsiSpace::new(&m, k)?;
            for i in 0..ids.len() {
                for j in i..ids.len() {
                    table.set(&ids[i], &ids[j], space.similarity_at(i, j))?;
                }
            }
        }
        Model::Js => {
            for i in 0..ids.len() {
                for j in i..ids.len() {
                    table.set(&ids[i], &ids[j], similarity_js(&documents[i], &documents[j]))?;
                }
            }
        }
    }
    Ok(table)
}
