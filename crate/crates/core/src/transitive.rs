//! Outer- and inner-transitive link deduction, path formation and the
//! bonus-based score adjustment.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Level};
use crate::enrich::{select_within, EnrichmentConfig};
use crate::error::{Error, Result};
use crate::irmodels::RankedList;
use crate::irmodels::SimilarityTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkKind {
    Outer,
    Inner,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitiveLink {
    pub from: String,
    pub to: String,
    pub kind: LinkKind,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitivePath {
    pub nodes: Vec<String>,
    pub links: Vec<TransitiveLink>,
    pub bonus: f64,
}

impl TransitivePath {
    fn from_links(links: Vec<TransitiveLink>) -> Self {
        let mut nodes = vec![links[0].from.clone()];
        nodes.extend(links.iter().map(|l| l.to.clone()));
        let bonus = links.iter().map(|l| l.score).product();
        TransitivePath { nodes, links, bonus }
    }

    pub fn source(&self) -> &str {
        &self.nodes[0]
    }

    pub fn target(&self) -> &str {
        self.nodes.last().expect("paths have nodes")
    }

    pub fn has_inner(&self) -> bool {
        self.links.iter().any(|l| l.kind == LinkKind::Inner)
    }
}

/// Thresholds after `n` consumed hops: the relative threshold grows by 0.1
/// per hop and the cap shrinks by one, never below one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopState {
    pub n: usize,
    pub m_eff: f64,
    pub t_eff: usize,
}

impl HopState {
    pub fn start(cfg: &EnrichmentConfig) -> Self {
        Self::at(cfg, 0)
    }

    pub fn at(cfg: &EnrichmentConfig, n: usize) -> Self {
        HopState {
            n,
            m_eff: 0.1 * n as f64 + cfg.m,
            t_eff: cfg.t.saturating_sub(n).max(1),
        }
    }

    pub fn next(&self, cfg: &EnrichmentConfig) -> Self {
        Self::at(cfg, self.n + 1)
    }
}

/// Links from `from` to the best members of `pool` under `state`.
pub fn candidate_links(
    from: &str,
    pool: &[String],
    table: &SimilarityTable,
    state: &HopState,
    kind: LinkKind,
) -> Result<Vec<TransitiveLink>> {
    let scored = pool
        .iter()
        .filter(|p| p.as_str() != from)
        .map(|p| Ok((p.clone(), table.get(from, p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(select_within(scored, state.m_eff, state.t_eff)
        .into_iter()
        .map(|(to, score)| TransitiveLink {
            from: from.to_owned(),
            to,
            kind,
            score,
        })
        .collect())
}

/// Paths from `source` over explicit level lists. Shapes: S-I-T, then
/// S-S'-I-T and S-I-I'-T when `inner` is set.
pub fn form_paths_in(
    source: &str,
    sources: &[String],
    intermediates: &[String],
    targets: &[String],
    table: &SimilarityTable,
    cfg: &EnrichmentConfig,
    inner: bool,
) -> Result<Vec<TransitivePath>> {
    use LinkKind::{Inner, Outer};
    let s0 = HopState::start(cfg);
    let s1 = s0.next(cfg);
    let s2 = s1.next(cfg);
    let mut paths = Vec::new();
    if intermediates.is_empty() || targets.is_empty() {
        return Ok(paths);
    }

    let first = candidate_links(source, intermediates, table, &s0, Outer)?;
    for si in &first {
        for it in candidate_links(&si.to, targets, table, &s1, Outer)? {
            paths.push(TransitivePath::from_links(vec![si.clone(), it]));
        }
    }
    if !inner {
        return Ok(paths);
    }

    for ss in candidate_links(source, sources, table, &s0, Inner)? {
        for si in candidate_links(&ss.to, intermediates, table, &s1, Outer)? {
            for it in candidate_links(&si.to, targets, table, &s2, Outer)? {
                paths.push(TransitivePath::from_links(vec![ss.clone(), si.clone(), it]));
            }
        }
    }
    for si in &first {
        for ii in candidate_links(&si.to, intermediates, table, &s1, Inner)? {
            for it in candidate_links(&ii.to, targets, table, &s2, Outer)? {
                paths.push(TransitivePath::from_links(vec![si.clone(), ii.clone(), it]));
            }
        }
    }
    Ok(paths)
}

pub fn form_paths(
    source: &str,
    dataset: &Dataset,
    table: &SimilarityTable,
    cfg: &EnrichmentConfig,
    inner: bool,
) -> Result<Vec<TransitivePath>> {
    form_paths_in(
        source,
        &dataset.ids(Level::Source),
        &dataset.ids(Level::Intermediate),
        &dataset.ids(Level::Target),
        table,
        cfg,
        inner,
    )
}

/// `IR' = IR * prod(1 + bonus)` over every path ending at the pair.
pub fn adjust_scores(candidates: &[RankedList], paths: &[TransitivePath]) -> Vec<RankedList> {
    let mut factor: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    for p in paths {
        *factor.entry((p.source(), p.target())).or_insert(1.0) *= 1.0 + p.bonus;
    }
    candidates
        .iter()
        .map(|list| {
            let mut out = list.clone();
            for c in &mut out.candidates {
                if let Some(f) = factor.get(&(list.source.as_str(), c.target.as_str())) {
                    c.score *= f;
                }
            }
            out.sort();
            out
        })
        .collect()
}

/// Checks the structural rules of a path against the dataset levels.
pub fn validate_path(path: &TransitivePath, dataset: &Dataset) -> Result<()> {
    let fail = |msg: &str| Err(Error::Validation(format!("path {:?}: {msg}", path.nodes)));
    let level = |id: &str| dataset.artifact(id).map(|a| a.level);
    let hops = path.links.len();
    if path.nodes.len() != hops + 1 {
        return fail("node and link counts disagree");
    }
    let inner = path.links.iter().filter(|l| l.kind == LinkKind::Inner).count();
    match (hops, inner) {
        (2, 0) | (3, 1) => {}
        _ => return fail("must have two outer hops or three hops with one inner link"),
    }
    for (i, l) in path.links.iter().enumerate() {
        if l.from != path.nodes[i] || l.to != path.nodes[i + 1] {
            return fail("links do not chain through the nodes");
        }
        let (Some(a), Some(b)) = (level(&l.from), level(&l.to)) else {
            return fail("unknown artifact");
        };
        let legal = match l.kind {
            LinkKind::Inner => a == b && a != Level::Target,
            LinkKind::Outer => matches!(
                (a, b),
                (Level::Source, Level::Intermediate) | (Level::Intermediate, Level::Target)
            ),
        };
        if !legal {
            return fail("link connects illegal levels");
        }
        if !(0.0..=1.0).contains(&l.score) {
            return fail("link score outside [0, 1]");
        }
    }
    if level(path.source()) != Some(Level::Source) || level(path.target()) != Some(Level::Target) {
        return fail("must run from a source to a target");
    }
    let distinct: HashSet<&String> = path.nodes.iter().collect();
    if distinct.len() != path.nodes.len() {
        return fail("repeats a node");
    }
    let product: f64 = path.links.iter().map(|l| l.score).product();
    if (product - path.bonus).abs() > 1e-12 || !(0.0..=1.0).contains(&path.bonus) {
        return fail("bonus is not the product of link scores");
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct PathExport<'a> {
    nodes: &'a [String],
    scores: Vec<f64>,
    bonus: f64,
}

#[derive(Debug, Serialize)]
struct SourcePaths<'a> {
    source: &'a str,
    paths: Vec<PathExport<'a>>,
}

/// Path traces grouped by source, in enumeration order. Sources without
/// paths are omitted.
pub fn paths_to_json(paths: &[TransitivePath]) -> serde_json::Value {
    let mut grouped: Vec<SourcePaths> = Vec::new();
    for p in paths {
        let export = PathExport {
            nodes: &p.nodes,
            scores: p.links.iter().map(|l| round6(l.score)).collect(),
            bonus: round6(p.bonus),
        };
        match grouped.last_mut() {
            Some(g) if g.source == p.source() => g.paths.push(export),
            _ => grouped.push(SourcePaths {
                source: p.source(),
                paths: vec![export],
            }),
        }
    }
    serde_json::to_value(grouped).expect("serializable")
}

pub(crate) fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Artifact;
    use crate::irmodels::Candidate;
    use crate::irmodels::Model;
    use proptest::prelude::*;

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn table(all: &[&str], pairs: &[(&str, &str, f64)]) -> SimilarityTable {
        let mut t = SimilarityTable::new(Model::Vsm, ids(all));
        for (a, b, s) in pairs {
            t.set(a, b, *s).unwrap();
        }
        t
    }

    #[test]
    fn hop_states() {
        let cfg = EnrichmentConfig::default();
        let s1 = HopState::at(&cfg, 1);
        let s2 = HopState::at(&cfg, 2);
        assert_eq!((s1.m_eff, s1.t_eff), (0.6, 2));
        assert_eq!((s2.m_eff, s2.t_eff), (0.7, 1));
        assert_eq!(HopState::at(&cfg, 5).t_eff, 1);
    }

    #[test]
    fn candidate_links_thresholds() {
        let cfg = EnrichmentConfig::default();
        let t = table(
            &["DD-694", "DD-647", "DD-700", "DD-701"],
            &[
                ("DD-694", "DD-647", 0.5),
                ("DD-694", "DD-700", 0.25),
                ("DD-694", "DD-701", 0.1),
            ],
        );
        let pool = ids(&["DD-647", "DD-694", "DD-700", "DD-701"]);
        let got = candidate_links("DD-694", &pool, &t, &HopState::at(&cfg, 1), LinkKind::Inner).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].to, "DD-647");

        let zero = table(&["a", "b", "c"], &[]);
        assert!(candidate_links(
            "a",
            &ids(&["b", "c"]),
            &zero,
            &HopState::start(&cfg),
            LinkKind::Outer
        )
        .unwrap()
        .is_empty());
    }

    #[test]
    fn single_path_bonus() {
        let lists = vec![RankedList {
            source: "s".into(),
            candidates: vec![
                Candidate {
                    target: "t".into(),
                    score: 0.2,
                },
                Candidate {
                    target: "u".into(),
                    score: 0.25,
                },
            ],
        }];
        let link = |a: &str, b: &str, s| TransitiveLink {
            from: a.into(),
            to: b.into(),
            kind: LinkKind::Outer,
            score: s,
        };
        let p = TransitivePath::from_links(vec![link("s", "i", 0.6), link("i", "t", 0.7)]);
        assert!((p.bonus - 0.42).abs() < 1e-15);
        let out = adjust_scores(&lists, &[p]);
        assert!((out[0].score("t").unwrap() - 0.284).abs() < 1e-12);
        assert_eq!(out[0].score("u"), Some(0.25));
        assert_eq!(out[0].candidates[0].target, "t");
    }

    #[test]
    fn two_paths_compose_multiplicatively() {
        let lists = vec![RankedList {
            source: "s".into(),
            candidates: vec![Candidate {
                target: "t".into(),
                score: 0.5,
            }],
        }];
        let mk = |b: f64| TransitivePath {
            nodes: ids(&["s", "i", "t"]),
            links: vec![],
            bonus: b,
        };
        let out = adjust_scores(&lists, &[mk(0.1), mk(0.2)]);
        assert!((out[0].score("t").unwrap() - 0.5 * 1.1 * 1.2).abs() < 1e-15);
    }

    fn fig3() -> (Dataset, SimilarityTable) {
        let a = |id: &str, level| Artifact::natural(id, level, "");
        let ds = Dataset {
            sources: vec![a("RE-691", Level::Source), a("RE-695", Level::Source)],
            intermediates: vec![a("DD-647", Level::Intermediate), a("DD-694", Level::Intermediate)],
            targets: vec![
                a("AFEmergencyComponent", Level::Target),
                a("AFInfoBox", Level::Target),
            ],
            ..Dataset::default()
        };
        let all: Vec<String> = ds.artifacts().map(|a| a.id.clone()).collect();
        let all: Vec<&str> = all.iter().map(String::as_str).collect();
        let t = table(
            &all,
            &[
                ("RE-691", "DD-694", 0.6),
                ("RE-691", "DD-647", 0.2),
                ("RE-691", "RE-695", 0.5),
                ("RE-695", "DD-694", 0.5),
                ("RE-695", "DD-647", 0.1),
                ("DD-694", "DD-647", 0.6),
                ("DD-694", "AFEmergencyComponent", 0.5),
                ("DD-694", "AFInfoBox", 0.2),
                ("DD-647", "AFInfoBox", 0.7),
                ("DD-647", "AFEmergencyComponent", 0.3),
            ],
        );
        (ds, t)
    }

    #[test]
    fn motivating_paths() {
        let (ds, t) = fig3();
        let cfg = EnrichmentConfig::default();
        let paths = form_paths("RE-691", &ds, &t, &cfg, true).unwrap();
        let nodes: Vec<Vec<String>> = paths.iter().map(|p| p.nodes.clone()).collect();
        assert!(nodes.contains(&ids(&["RE-691", "DD-694", "AFEmergencyComponent"])));
        assert!(nodes.contains(&ids(&["RE-691", "DD-694", "DD-647", "AFInfoBox"])));
        // after the source-level inner link no intermediate-level one follows
        assert!(nodes.contains(&ids(&["RE-691", "RE-695", "DD-694", "AFEmergencyComponent"])));
        assert!(!nodes.iter().any(|n| n.len() > 4));
        for p in &paths {
            validate_path(p, &ds).unwrap();
        }
        let outer = form_paths("RE-691", &ds, &t, &cfg, false).unwrap();
        assert!(outer.iter().all(|p| paths.contains(p)));
        assert!(outer.iter().all(|p| !p.has_inner()));
    }

    #[test]
    fn no_intermediates_no_paths() {
        let (mut ds, t) = fig3();
        ds.intermediates.clear();
        assert!(form_paths("RE-691", &ds, &t, &EnrichmentConfig::default(), true)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn validator_rejects_bad_paths() {
        let (ds, t) = fig3();
        let mut p = form_paths("RE-691", &ds, &t, &EnrichmentConfig::default(), false).unwrap()[0].clone();
        p.bonus = 0.99;
        assert!(validate_path(&p, &ds).is_err());
        p.bonus = p.links.iter().map(|l| l.score).product();
        p.links[0].kind = LinkKind::Inner;
        assert!(validate_path(&p, &ds).is_err());
    }

    #[test]
    fn json_export_groups_by_source() {
        let (ds, t) = fig3();
        let paths = form_paths("RE-691", &ds, &t, &EnrichmentConfig::default(), true).unwrap();
        let v = paths_to_json(&paths);
        assert_eq!(v.as_array().unwrap().len(), 1);
        assert_eq!(v[0]["source"], "RE-691");
        assert_eq!(v[0]["paths"].as_array().unwrap().len(), paths.len());
    }

    proptest! {
        #[test]
        fn stricter_thresholds_never_add_paths(
            scores in proptest::collection::vec(0.0f64..1.0, 21),
            m in 0.1f64..0.9,
            dm in 0.0f64..0.5,
            t in 1usize..4,
        ) {
            let (ds, _) = fig3();
            let all: Vec<String> = ds.artifacts().map(|a| a.id.clone()).collect();
            let mut tab = SimilarityTable::new(Model::Vsm, all.clone());
            let mut k = 0;
            for i in 0..all.len() {
                for j in i + 1..all.len() {
                    tab.set(&all[i], &all[j], scores[k]).unwrap();
                    k += 1;
                }
            }
            let loose = EnrichmentConfig { m, t: t + 1 };
            let strict = EnrichmentConfig { m: (m + dm).min(1.0), t };
            for s in ds.ids(Level::Source) {
                let a = form_paths(&s, &ds, &tab, &loose, true).unwrap();
                let b = form_paths(&s, &ds, &tab, &strict, true).unwrap();
                for p in &b {
                    prop_assert!(a.iter().any(|q| q.nodes == p.nodes));
                }
            }
        }
    }
}
