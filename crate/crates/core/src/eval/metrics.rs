use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::Link;
use crate::error::{Error, Result};
use crate::irmodels::RankedList;

/// One point of a precision/recall curve, both in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrPoint {
    pub recall: f64,
    pub precision: f64,
}

impl PrPoint {
    /// Harmonic mean; zero when both values are zero.
    pub fn f_measure(&self) -> f64 {
        let (p, r) = (self.precision, self.recall);
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

/// All source-target candidates in one list, by descending score with
/// source then target id breaking ties.
pub fn global_ranking(lists: &[RankedList]) -> Vec<(Link, f64)> {
    let mut all: Vec<(Link, f64)> = lists
        .iter()
        .flat_map(|l| {
            l.candidates
                .iter()
                .map(|c| ((l.source.clone(), c.target.clone()), c.score))
        })
        .collect();
    all.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    all
}

fn require_oracle(oracle: &BTreeSet<Link>) -> Result<()> {
    if oracle.is_empty() {
        return Err(Error::Evaluation("the oracle has no links".into()));
    }
    Ok(())
}

/// Precision and recall at every cutoff of `ranked`.
pub fn precision_recall(ranked: &[Link], oracle: &BTreeSet<Link>) -> Result<Vec<PrPoint>> {
    require_oracle(oracle)?;
    let total = oracle.len() as f64;
    let mut hits = 0usize;
    Ok(ranked
        .iter()
        .enumerate()
        .map(|(k, link)| {
            if oracle.contains(link) {
                hits += 1;
            }
            PrPoint {
                recall: 100.0 * hits as f64 / total,
                precision: 100.0 * hits as f64 / (k + 1) as f64,
            }
        })
        .collect())
}

/// Mean of the precision at each relevant rank, divided over the whole
/// oracle, in percent.
pub fn average_precision(ranked: &[Link], oracle: &BTreeSet<Link>) -> Result<f64> {
    require_oracle(oracle)?;
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (k, link) in ranked.iter().enumerate() {
        if oracle.contains(link) {
            hits += 1;
            sum += hits as f64 / (k + 1) as f64;
        }
    }
    Ok(100.0 * sum / oracle.len() as f64)
}

/// AP of each source's own list; sources with no relevant target are left
/// out.
pub fn per_query_ap(lists: &[RankedList], oracle: &BTreeSet<Link>) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for list in lists {
        let relevant: BTreeSet<Link> = oracle
            .iter()
            .filter(|(s, _)| *s == list.source)
            .cloned()
            .collect();
        if relevant.is_empty() {
            continue;
        }
        let ranked: Vec<Link> = list
            .candidates
            .iter()
            .map(|c| (list.source.clone(), c.target.clone()))
            .collect();
        out.insert(list.source.clone(), average_precision(&ranked, &relevant)?);
    }
    Ok(out)
}

pub fn mean_average_precision(lists: &[RankedList], oracle: &BTreeSet<Link>) -> Result<f64> {
    let aps = per_query_ap(lists, oracle)?;
    if aps.is_empty() {
        return Err(Error::Evaluation("no query has a relevant target".into()));
    }
    Ok(aps.values().sum::<f64>() / aps.len() as f64)
}

/// F at recall levels 1..=100, taken at the first cutoff whose recall
/// reaches the level; zero for levels never reached.
pub fn f_at_recall(curve: &[PrPoint]) -> Vec<f64> {
    let mut out = Vec::with_capacity(100);
    let mut k = 0;
    for level in 1..=100 {
        let level = level as f64;
        while k < curve.len() && curve[k].recall < level - 1e-9 {
            k += 1;
        }
        out.push(curve.get(k).map_or(0.0, PrPoint::f_measure));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub ap: f64,
    pub map: f64,
    pub per_query_ap: BTreeMap<String, f64>,
    pub pr_curve: Vec<PrPoint>,
    pub f_at_recall: Vec<f64>,
}

pub fn evaluate(lists: &[RankedList], oracle: &BTreeSet<Link>) -> Result<EvalReport> {
    let ranked: Vec<Link> = global_ranking(lists).into_iter().map(|(l, _)| l).collect();
    let pr_curve = precision_recall(&ranked, oracle)?;
    Ok(EvalReport {
        ap: average_precision(&ranked, oracle)?,
        map: mean_average_precision(lists, oracle)?,
        per_query_ap: per_query_ap(lists, oracle)?,
        f_at_recall: f_at_recall(&pr_curve),
        pr_curve,
    })
}

impl EvalReport {
    /// Copy with every value rounded to six decimals, for stable output.
    pub fn rounded(&self) -> EvalReport {
        let r = crate::transitive::round6;
        EvalReport {
            ap: r(self.ap),
            map: r(self.map),
            per_query_ap: self
                .per_query_ap
                .iter()
                .map(|(k, v)| (k.clone(), r(*v)))
                .collect(),
            pr_curve: self
                .pr_curve
                .iter()
                .map(|p| PrPoint {
                    recall: r(p.recall),
                    precision: r(p.precision),
                })
                .collect(),
            f_at_recall: self.f_at_recall.iter().map(|v| r(*v)).collect(),
        }
    }
}

pub fn write_pr_csv<W: Write>(out: &mut W, curve: &[PrPoint]) -> std::io::Result<()> {
    writeln!(out, "recall,precision")?;
    for p in curve {
        writeln!(out, "{:.6},{:.6}", p.recall, p.precision)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irmodels::Candidate;

    fn link(s: &str, t: &str) -> Link {
        (s.to_owned(), t.to_owned())
    }

    fn list(source: &str, targets: &[(&str, f64)]) -> RankedList {
        let mut l = RankedList {
            source: source.into(),
            candidates: targets
                .iter()
                .map(|(t, s)| Candidate {
                    target: t.to_string(),
                    score: *s,
                })
                .collect(),
        };
        l.sort();
        l
    }

    #[test]
    fn hit_then_miss_curve() {
        let oracle = BTreeSet::from([link("s", "a")]);
        let curve = precision_recall(&[link("s", "a"), link("s", "b")], &oracle).unwrap();
        assert_eq!(
            curve,
            [
                PrPoint {
                    recall: 100.0,
                    precision: 100.0
                },
                PrPoint {
                    recall: 100.0,
                    precision: 50.0
                }
            ]
        );
    }

    #[test]
    fn no_hits() {
        let oracle = BTreeSet::from([link("s", "z")]);
        let curve = precision_recall(&[link("s", "a"), link("s", "b")], &oracle).unwrap();
        assert!(curve.iter().all(|p| p.recall == 0.0 && p.precision == 0.0));
        assert!(f_at_recall(&curve).iter().all(|f| *f == 0.0));
    }

    #[test]
    fn ap_examples() {
        let oracle = BTreeSet::from([link("s", "a"), link("s", "b"), link("s", "c")]);
        let perfect: Vec<Link> = ["a", "b", "c", "d", "e"].iter().map(|t| link("s", t)).collect();
        assert_eq!(average_precision(&perfect, &oracle).unwrap(), 100.0);

        let one = BTreeSet::from([link("s", "b")]);
        assert_eq!(
            average_precision(&[link("s", "a"), link("s", "b")], &one).unwrap(),
            50.0
        );
        assert!(matches!(
            average_precision(&perfect, &BTreeSet::new()),
            Err(Error::Evaluation(_))
        ));
    }

    #[test]
    fn map_examples() {
        let lists = [
            list("s1", &[("a", 0.9), ("b", 0.1)]),
            list("s2", &[("a", 0.9), ("b", 0.1)]),
        ];
        let oracle = BTreeSet::from([link("s1", "a"), link("s2", "b")]);
        assert_eq!(mean_average_precision(&lists, &oracle).unwrap(), 75.0);
        let single = BTreeSet::from([link("s2", "b")]);
        assert_eq!(mean_average_precision(&lists, &single).unwrap(), 50.0);
        let none = BTreeSet::from([link("s9", "b")]);
        assert!(mean_average_precision(&lists, &none).is_err());
    }

    #[test]
    fn f_sampling_uses_first_reaching_cutoff() {
        let oracle = BTreeSet::from([link("s", "a"), link("s", "c")]);
        let ranked = [link("s", "a"), link("s", "b"), link("s", "c")];
        let curve = precision_recall(&ranked, &oracle).unwrap();
        let f = f_at_recall(&curve);
        // levels 1..=50 stop at rank 1 (P=100, R=50), later ones at rank 3
        let f1 = 2.0 * 100.0 * 50.0 / 150.0;
        let f3 = 2.0 * (200.0 / 3.0) * 100.0 / (200.0 / 3.0 + 100.0);
        assert!((f[0] - f1).abs() < 1e-12 && (f[49] - f1).abs() < 1e-12);
        assert!((f[50] - f3).abs() < 1e-12 && (f[99] - f3).abs() < 1e-12);
    }

    #[test]
    fn report_and_csv() {
        let lists = [
            list("s1", &[("a", 0.9), ("b", 0.3)]),
            list("s2", &[("a", 0.5), ("b", 0.6)]),
        ];
        let oracle = BTreeSet::from([link("s1", "a"), link("s2", "b")]);
        let r = evaluate(&lists, &oracle).unwrap();
        assert_eq!((r.ap, r.map), (100.0, 100.0));
        assert_eq!(r.pr_curve.len(), 4);
        assert!(r.pr_curve.windows(2).all(|w| w[0].recall <= w[1].recall));
        let mut buf = Vec::new();
        write_pr_csv(&mut buf, &r.pr_curve[..1]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "recall,precision\n50.000000,100.000000\n"
        );
    }
}
