//! Independent oracles and criterion checks shared by the integration tests
//! and the acceptance gate. Each check returns `Err(reason)` on failure.
#![allow(dead_code)]
// `!(err <= tol)` is meant to fail on NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tracelink::biterm::{code_biterms, extract_code_biterms, StemPair};
use tracelink::corpus::{load_dataset, Artifact, CodeParts, Dataset, Document, Level, TermCounts};
use tracelink::enrich::EnrichmentConfig;
use tracelink::eval::{average_precision, cliffs_delta, mean_average_precision, wilcoxon_rank_sum};
use tracelink::irmodels::{build_table, Candidate, Model, RankedList, SimilarityTable};
use tracelink::pipeline::{run, Mode, PipelineConfig, Prepared};
use tracelink::transitive::{adjust_scores, form_paths, HopState, TransitivePath};

pub type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !($cond) {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/motivating/manifest.json")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- motivating

pub fn motivating_example() -> Check {
    let ds = load_dataset(&manifest()).map_err(|e| e.to_string())?;
    let prep = Prepared::new(&ds, None).map_err(|e| e.to_string())?;

    let info = prep
        .filtered
        .targets
        .iter()
        .find(|b| b.artifact_id == "AFInfoBox")
        .ok_or("AFInfoBox missing")?;
    let kept: Vec<String> = info.biterms.keys().map(|p| p.to_string()).collect();
    ensure!(kept == ["assign rout"], "AFInfoBox keeps {kept:?}");

    let cfg = PipelineConfig::default();
    let full = run(&prep, &cfg).map_err(|e| e.to_string())?;
    let nodes: Vec<Vec<&str>> = full
        .paths
        .iter()
        .map(|p| p.nodes.iter().map(String::as_str).collect())
        .collect();
    for want in [
        vec!["RE-691", "DD-694", "AFEmergencyComponent"],
        vec!["RE-691", "DD-694", "DD-647", "AFInfoBox"],
    ] {
        ensure!(nodes.contains(&want), "missing path {want:?} in {nodes:?}");
    }

    let ir = run(
        &prep,
        &PipelineConfig {
            mode: Mode::IrOnly,
            ..cfg
        },
    )
    .map_err(|e| e.to_string())?;
    let position = |lists: &[RankedList]| {
        lists
            .iter()
            .find(|l| l.source == "RE-691")
            .and_then(|l| l.position("AFInfoBox"))
    };
    let (before, after) = (position(&ir.ranking), position(&full.ranking));
    ensure!(
        matches!((before, after), (Some(b), Some(a)) if a < b),
        "AFInfoBox rank for RE-691: ir-only {before:?}, b+o+i {after:?}"
    );
    Ok(())
}

// ------------------------------------------------------------------ biterms

fn split(s: &str) -> Vec<String> {
    tracelink::corpus::split_identifier(s)
}

pub fn biterm_conformance() -> Check {
    let class_only = Artifact::code("AFInfoBox", Level::Target, "public class AFInfoBox { }");
    let got: BTreeMap<String, u32> = extract_code_biterms(&class_only).to_json_map();
    let want = BTreeMap::from([
        ("af box".to_string(), 2),
        ("af info".to_string(), 2),
        ("box info".to_string(), 2),
    ]);
    ensure!(got == want, "AFInfoBox class-name biterms {got:?}");

    // once in a class name, twice in comments, three times as a parameter type
    let mut parts = CodeParts::default();
    parts.class_names.push(split("RouteAssigner"));
    parts.comments.push(vec!["route".into(), "assigner".into()]);
    parts.comments.push(vec!["assigner".into(), "route".into()]);
    for _ in 0..3 {
        parts.parameter_type_names.push(split("RouteAssigner"));
    }
    let n = code_biterms("C", &parts).count("assign", "rout");
    ensure!(n == 5, "composite importance count {n}, expected 5");

    let pair = StemPair::new("rout", "assign").ok_or("pair")?;
    ensure!(
        pair.compound_term() == "assign_rout",
        "compound term {}",
        pair.compound_term()
    );
    Ok(())
}

// --------------------------------------------------------------- similarity

/// Random documents over a vocabulary of `terms` words, every document
/// nonempty.
pub fn random_documents(rng: &mut ChaCha8Rng, docs: usize, terms: usize) -> Vec<Document> {
    (0..docs)
        .map(|d| {
            let mut counts = TermCounts::new();
            for t in 0..terms {
                if rng.random_bool(0.3) {
                    counts.insert(format!("w{t:02}"), rng.random_range(1..6));
                }
            }
            if counts.is_empty() {
                counts.insert(format!("w{:02}", rng.random_range(0..terms)), 1);
            }
            Document::new(format!("d{d:02}"), counts)
        })
        .collect()
}

/// tf-idf cosine straight from the definition.
pub fn oracle_vsm(docs: &[Document]) -> Vec<Vec<f64>> {
    let n = docs.len() as f64;
    let mut df: HashMap<&str, f64> = HashMap::new();
    for d in docs {
        for t in d.terms.keys() {
            *df.entry(t.as_str()).or_default() += 1.0;
        }
    }
    let vecs: Vec<HashMap<&str, f64>> = docs
        .iter()
        .map(|d| {
            d.terms
                .iter()
                .map(|(t, &c)| (t.as_str(), c as f64 * (n / df[t.as_str()]).ln()))
                .collect()
        })
        .collect();
    let norm = |v: &HashMap<&str, f64>| v.values().map(|x| x * x).sum::<f64>().sqrt();
    vecs.iter()
        .map(|a| {
            vecs.iter()
                .map(|b| {
                    let dot: f64 = a.iter().map(|(t, x)| x * b.get(t).copied().unwrap_or(0.0)).sum();
                    let (na, nb) = (norm(a), norm(b));
                    if na == 0.0 || nb == 0.0 {
                        0.0
                    } else {
                        (dot / (na * nb)).clamp(0.0, 1.0)
                    }
                })
                .collect()
        })
        .collect()
}

/// `1 - JSD` via `H(M) - (H(P) + H(Q)) / 2` on the smoothed distributions.
pub fn oracle_js(a: &Document, b: &Document) -> f64 {
    const EPS: f64 = 1e-9;
    let vocab: BTreeSet<&String> = a.terms.keys().chain(b.terms.keys()).collect();
    let dist = |d: &Document| -> Vec<f64> {
        let total: f64 = d.terms.values().map(|&c| c as f64).sum();
        let raw: Vec<f64> = vocab
            .iter()
            .map(|t| d.terms.get(*t).copied().unwrap_or(0) as f64 / total + EPS)
            .collect();
        let z: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / z).collect()
    };
    let h = |p: &[f64]| -> f64 { -p.iter().filter(|x| **x > 0.0).map(|x| x * x.log2()).sum::<f64>() };
    let (p, q) = (dist(a), dist(b));
    let m: Vec<f64> = p.iter().zip(&q).map(|(x, y)| 0.5 * (x + y)).collect();
    (1.0 - (h(&m) - 0.5 * (h(&p) + h(&q)))).clamp(0.0, 1.0)
}

fn table_error(
    table: &SimilarityTable,
    docs: &[Document],
    oracle: impl Fn(usize, usize) -> f64,
) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for i in 0..docs.len() {
        for j in 0..docs.len() {
            let got = table
                .get(&docs[i].artifact_id, &docs[j].artifact_id)
                .map_err(|e| e.to_string())?;
            worst = worst.max((got - oracle(i, j)).abs());
        }
    }
    Ok(worst)
}

/// Singular values of the tf-idf matrix via nalgebra.
fn nalgebra_singular_values(docs: &[Document]) -> Result<Vec<f64>, String> {
    let m = tracelink::irmodels::build_matrix(docs).map_err(|e| e.to_string())?;
    let a = nalgebra::DMatrix::from_fn(m.n_terms(), m.n_docs(), |r, c| m.columns[c][r]);
    let mut s: Vec<f64> = a.svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

pub fn similarity_oracles() -> Check {
    let mut rng = rng(7);
    let (mut vsm_err, mut lsi_err, mut js_err, mut sv_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let docs = rng.random_range(2..=20);
        let terms = rng.random_range(2..=50);
        let documents = random_documents(&mut rng, docs, terms);
        let oracle = oracle_vsm(&documents);

        let vsm = build_table(Model::Vsm, &documents, None).map_err(|e| e.to_string())?;
        vsm_err = vsm_err.max(table_error(&vsm, &documents, |i, j| oracle[i][j])?);

        let matrix = tracelink::irmodels::build_matrix(&documents).map_err(|e| e.to_string())?;
        let full = matrix.n_terms().min(matrix.n_docs());
        let lsi = build_table(Model::Lsi, &documents, Some(full)).map_err(|e| e.to_string())?;
        lsi_err = lsi_err.max(table_error(&lsi, &documents, |i, j| oracle[i][j])?);

        let svd = tracelink::irmodels::thin_svd(&matrix.columns).map_err(|e| e.to_string())?;
        let reference = nalgebra_singular_values(&documents)?;
        for (k, s) in reference.iter().enumerate() {
            sv_err = sv_err.max((svd.sigma[k] - s).abs() / reference[0].max(1.0));
        }

        let js = build_table(Model::Js, &documents, None).map_err(|e| e.to_string())?;
        js_err = js_err.max(table_error(&js, &documents, |i, j| {
            oracle_js(&documents[i], &documents[j])
        })?);
    }
    ensure!(vsm_err <= 1e-10, "VSM max abs error {vsm_err:e}");
    ensure!(lsi_err <= 1e-8, "full-rank LSI vs VSM max abs error {lsi_err:e}");
    ensure!(js_err <= 1e-9, "JS max abs error {js_err:e}");
    ensure!(
        sv_err <= 1e-10,
        "singular values differ from nalgebra by {sv_err:e}"
    );
    Ok(())
}

// ---------------------------------------------------------------- transitive

pub struct RandomLevels {
    pub dataset: Dataset,
    pub table: SimilarityTable,
}

/// Up to `max` artifacts per level (targets and intermediates may be
/// missing) and a random symmetric table; some tables use coarse values to
/// provoke ties.
pub fn random_levels(rng: &mut ChaCha8Rng, max: usize) -> RandomLevels {
    let mk = |prefix: &str, n: usize, level| -> Vec<Artifact> {
        (0..n)
            .map(|i| Artifact::natural(format!("{prefix}{i}"), level, ""))
            .collect()
    };
    let dataset = Dataset {
        sources: mk("S", rng.random_range(1..=max), Level::Source),
        intermediates: mk("I", rng.random_range(0..=max), Level::Intermediate),
        targets: mk("T", rng.random_range(1..=max), Level::Target),
        ..Dataset::default()
    };
    let ids: Vec<String> = dataset.artifacts().map(|a| a.id.clone()).collect();
    let mut table = SimilarityTable::new(Model::Vsm, ids.clone());
    let coarse = rng.random_bool(0.3);
    for i in 0..ids.len() {
        table.set(&ids[i], &ids[i], 1.0).unwrap();
        for j in i + 1..ids.len() {
            let s = if rng.random_bool(0.1) {
                0.0
            } else if coarse {
                rng.random_range(0..=8) as f64 / 8.0
            } else {
                rng.random::<f64>()
            };
            table.set(&ids[i], &ids[j], s).unwrap();
        }
    }
    RandomLevels { dataset, table }
}

/// Whether the hop `from -> to` survives thresholding within `pool` after
/// `n` hops, decided by counting better-ranked competitors.
fn passes(
    table: &SimilarityTable,
    cfg: &EnrichmentConfig,
    n: usize,
    from: &str,
    to: &str,
    pool: &[String],
) -> bool {
    let score = |x: &str| table.get(from, x).unwrap();
    let others: Vec<&String> = pool.iter().filter(|p| p.as_str() != from).collect();
    let max = others.iter().map(|p| score(p)).fold(0.0f64, f64::max);
    if max <= 0.0 || !others.iter().any(|p| p.as_str() == to) {
        return false;
    }
    let s = score(to);
    let ahead = others
        .iter()
        .filter(|p| {
            let o = score(p);
            o > s || (o == s && p.as_str() < to)
        })
        .count();
    let m_eff = cfg.m + 0.1 * n as f64;
    let t_eff = if cfg.t > n { cfg.t - n } else { 1 };
    ahead < t_eff && s >= m_eff * max
}

/// Every level-legal 2- and 3-hop sequence whose hops all pass.
pub fn brute_force_paths(
    r: &RandomLevels,
    cfg: &EnrichmentConfig,
    source: &str,
    inner: bool,
) -> BTreeSet<Vec<String>> {
    let ds = &r.dataset;
    let (ss, is, ts) = (
        ds.ids(Level::Source),
        ds.ids(Level::Intermediate),
        ds.ids(Level::Target),
    );
    let ok = |n, a: &str, b: &str, pool: &[String]| passes(&r.table, cfg, n, a, b, pool);
    let mut out = BTreeSet::new();
    for i in &is {
        for t in &ts {
            if ok(0, source, i, &is) && ok(1, i, t, &ts) {
                out.insert(vec![source.to_owned(), i.clone(), t.clone()]);
            }
        }
    }
    if !inner {
        return out;
    }
    for s2 in ss.iter().filter(|s| s.as_str() != source) {
        for i in &is {
            for t in &ts {
                if ok(0, source, s2, &ss) && ok(1, s2, i, &is) && ok(2, i, t, &ts) {
                    out.insert(vec![source.to_owned(), s2.clone(), i.clone(), t.clone()]);
                }
            }
        }
    }
    for i in &is {
        for i2 in is.iter().filter(|x| *x != i) {
            for t in &ts {
                if ok(0, source, i, &is) && ok(1, i, i2, &is) && ok(2, i2, t, &ts) {
                    out.insert(vec![source.to_owned(), i.clone(), i2.clone(), t.clone()]);
                }
            }
        }
    }
    out
}

fn node_set(paths: &[TransitivePath]) -> Result<BTreeSet<Vec<String>>, String> {
    let set: BTreeSet<Vec<String>> = paths.iter().map(|p| p.nodes.clone()).collect();
    ensure!(set.len() == paths.len(), "duplicate paths emitted");
    Ok(set)
}

pub fn transitive_oracle() -> Check {
    let mut rng = rng(11);
    for case in 0..100 {
        let r = random_levels(&mut rng, 8);
        let cfg = EnrichmentConfig {
            m: rng.random_range(1..=9) as f64 / 10.0,
            t: rng.random_range(1..=4),
        };
        let mut all_paths = Vec::new();
        for s in r.dataset.ids(Level::Source) {
            let outer = form_paths(&s, &r.dataset, &r.table, &cfg, false).map_err(|e| e.to_string())?;
            let both = form_paths(&s, &r.dataset, &r.table, &cfg, true).map_err(|e| e.to_string())?;
            let (o, oi) = (node_set(&outer)?, node_set(&both)?);
            ensure!(
                o == brute_force_paths(&r, &cfg, &s, false),
                "case {case} source {s}: outer paths differ from enumeration"
            );
            ensure!(
                oi == brute_force_paths(&r, &cfg, &s, true),
                "case {case} source {s}: outer+inner paths differ from enumeration"
            );
            ensure!(o.is_subset(&oi), "case {case}: mode o paths not contained in o+i");
            for p in &both {
                tracelink::transitive::validate_path(p, &r.dataset).map_err(|e| e.to_string())?;
                let product: f64 = p
                    .links
                    .iter()
                    .map(|l| r.table.get(&l.from, &l.to).unwrap())
                    .product();
                ensure!((product - p.bonus).abs() < 1e-15, "case {case}: bonus mismatch");
            }
            all_paths.extend(both);
        }

        let lists: Vec<RankedList> = r
            .dataset
            .ids(Level::Source)
            .into_iter()
            .map(|s| RankedList {
                source: s,
                candidates: r
                    .dataset
                    .ids(Level::Target)
                    .into_iter()
                    .map(|t| Candidate {
                        target: t,
                        score: rng.random::<f64>(),
                    })
                    .collect(),
            })
            .collect();
        let adjusted = adjust_scores(&lists, &all_paths);
        for (before, after) in lists.iter().zip(&adjusted) {
            for c in &before.candidates {
                let new = after.score(&c.target).ok_or("candidate lost")?;
                ensure!(new >= c.score, "case {case}: IR' {new} < IR {}", c.score);
            }
        }
    }
    Ok(())
}

pub fn hop_state_arithmetic() -> Check {
    let cfg = EnrichmentConfig { m: 0.5, t: 3 };
    let s1 = HopState::at(&cfg, 1);
    let s2 = HopState::at(&cfg, 2);
    ensure!(
        (s1.m_eff, s1.t_eff) == (0.6, 2),
        "after one hop {:?}",
        (s1.m_eff, s1.t_eff)
    );
    ensure!(
        (s2.m_eff, s2.t_eff) == (0.7, 1),
        "after two hops {:?}",
        (s2.m_eff, s2.t_eff)
    );
    let via_next = HopState::start(&cfg).next(&cfg).next(&cfg);
    ensure!(via_next == s2, "stepping disagrees with direct construction");
    Ok(())
}

// ------------------------------------------------------------------ metrics

pub fn oracle_ap(ranked: &[(String, String)], oracle: &BTreeSet<(String, String)>) -> f64 {
    let mut sum = 0.0;
    for r in 0..ranked.len() {
        if oracle.contains(&ranked[r]) {
            let hits = ranked[..=r].iter().filter(|l| oracle.contains(*l)).count();
            sum += hits as f64 / (r + 1) as f64;
        }
    }
    100.0 * sum / oracle.len() as f64
}

pub fn oracle_map(lists: &[RankedList], oracle: &BTreeSet<(String, String)>) -> Option<f64> {
    let mut aps = Vec::new();
    for l in lists {
        let rel: BTreeSet<(String, String)> =
            oracle.iter().filter(|(s, _)| *s == l.source).cloned().collect();
        if rel.is_empty() {
            continue;
        }
        let ranked: Vec<(String, String)> = l
            .candidates
            .iter()
            .map(|c| (l.source.clone(), c.target.clone()))
            .collect();
        aps.push(oracle_ap(&ranked, &rel));
    }
    (!aps.is_empty()).then(|| aps.iter().sum::<f64>() / aps.len() as f64)
}

pub fn oracle_cliffs(a: &[f64], b: &[f64]) -> f64 {
    let mut dom = 0i64;
    for x in a {
        for y in b {
            dom += (x > y) as i64 - (x < y) as i64;
        }
    }
    dom.abs() as f64 / (a.len() * b.len()) as f64
}

/// Two-sided rank-sum p by enumerating every split of the pooled ranks.
pub fn oracle_rank_sum(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let rank = |x: f64| {
        let below = pooled.iter().filter(|y| **y < x).count() as f64;
        let equal = pooled.iter().filter(|y| **y == x).count() as f64;
        below + (equal + 1.0) / 2.0
    };
    let ranks: Vec<f64> = pooled.iter().map(|x| rank(*x)).collect();
    let mu = a.len() as f64 * (n as f64 + 1.0) / 2.0;
    let observed = (ranks[..a.len()].iter().sum::<f64>() - mu).abs();
    let (mut extreme, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        total += 1;
        let w: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        if (w - mu).abs() >= observed - 1e-9 {
            extreme += 1;
        }
    }
    extreme as f64 / total as f64
}

pub fn metric_oracles() -> Check {
    let mut rng = rng(23);
    for case in 0..100 {
        let sources = rng.random_range(1..=5);
        let targets = rng.random_range(1..=4);
        let mut lists = Vec::new();
        let mut oracle = BTreeSet::new();
        for s in 0..sources {
            let mut l = RankedList {
                source: format!("s{s}"),
                candidates: (0..targets)
                    .map(|t| Candidate {
                        target: format!("t{t}"),
                        score: rng.random_range(0..10) as f64 / 10.0,
                    })
                    .collect(),
            };
            l.sort();
            for t in 0..targets {
                if rng.random_bool(0.3) {
                    oracle.insert((format!("s{s}"), format!("t{t}")));
                }
            }
            lists.push(l);
        }
        if oracle.is_empty() {
            oracle.insert(("s0".to_string(), "t0".to_string()));
        }
        let global: Vec<(String, String)> = tracelink::eval::global_ranking(&lists)
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        let ap = average_precision(&global, &oracle).map_err(|e| e.to_string())?;
        let want = oracle_ap(&global, &oracle);
        ensure!((ap - want).abs() <= 1e-12, "case {case}: AP {ap} vs {want}");
        let map = mean_average_precision(&lists, &oracle).map_err(|e| e.to_string())?;
        let want = oracle_map(&lists, &oracle).ok_or("no relevant query")?;
        ensure!((map - want).abs() <= 1e-12, "case {case}: MAP {map} vs {want}");

        let a: Vec<f64> = (0..rng.random_range(1..=8))
            .map(|_| rng.random_range(0..6) as f64)
            .collect();
        let b: Vec<f64> = (0..rng.random_range(1..=8))
            .map(|_| rng.random_range(0..6) as f64)
            .collect();
        let (delta, _) = cliffs_delta(&a, &b).map_err(|e| e.to_string())?;
        ensure!(
            delta == oracle_cliffs(&a, &b),
            "case {case}: Cliff's delta {delta}"
        );
        let p = wilcoxon_rank_sum(&a, &b).map_err(|e| e.to_string())?;
        let want = oracle_rank_sum(&a, &b);
        ensure!(
            (p - want).abs() <= 1e-9,
            "case {case}: rank-sum p {p} vs exhaustive {want} for {a:?} {b:?}"
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------- cli

pub fn tracelink(args: &[&std::ffi::OsStr]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_tracelink"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs `ablate` twice into separate directories and compares every file
/// byte for byte.
pub fn ablate_is_deterministic() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let m = manifest();
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let o = tracelink(&[
            "ablate".as_ref(),
            "--manifest".as_ref(),
            m.as_os_str(),
            "--out".as_ref(),
            out.as_os_str(),
        ]);
        ensure!(
            o.status.success(),
            "ablate failed: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let mut files = BTreeMap::new();
        for entry in std::fs::read_dir(&out).map_err(|e| e.to_string())? {
            let p = entry.map_err(|e| e.to_string())?.path();
            files.insert(
                p.file_name().unwrap().to_owned(),
                std::fs::read(&p).map_err(|e| e.to_string())?,
            );
        }
        outputs.push(files);
    }
    ensure!(
        outputs[0].len() == 7,
        "expected 6 reports and a summary, got {}",
        outputs[0].len()
    );
    ensure!(outputs[0] == outputs[1], "two ablation runs differ");
    Ok(())
}
