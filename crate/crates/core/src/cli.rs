//! Command-line interface: argument definitions and the three commands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{PartialConfig, RunConfig};
use crate::corpus::load_dataset;
use crate::error::{Error, Result};
use crate::eval::{compare, evaluate, require_oracle, run_ablation, write_pr_csv, StatComparison};
use crate::irmodels::{read_ranked_csv, write_ranked_csv, Model};
use crate::pipeline::{biterms_json, parse_modes, run, Mode, Prepared};
use crate::transitive::{paths_to_json, round6};

#[derive(Debug, Parser)]
#[command(
    name = "tracelink",
    version,
    about = "Recover trace links between high- and low-level artifacts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank candidate links and write the transitive path traces.
    Trace(RunArgs),
    /// Evaluate a ranking against the dataset oracle.
    Eval(EvalArgs),
    /// Evaluate several modes and write a summary table.
    Ablate(AblateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Dataset manifest (JSON).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// IR model: vsm, lsi or js.
    #[arg(long)]
    pub model: Option<Model>,
    /// Ablation mode: ir-only, b, o, b+o, o+i or b+o+i.
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Relative similarity threshold.
    #[arg(long)]
    pub m: Option<f64>,
    /// Maximum number of related artifacts per hop.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub lsi_rank: Option<usize>,
    /// Directory of `<id>.pairs` dependency files for prose artifacts.
    #[arg(long)]
    pub pairs_dir: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Ranked links CSV to evaluate; runs the pipeline when absent.
    #[arg(long)]
    pub ranked: Option<PathBuf>,
    /// Second ranked links CSV to compare against.
    #[arg(long)]
    pub compare: Option<PathBuf>,
    /// Use the paired signed-rank test instead of the rank-sum test.
    #[arg(long)]
    pub paired: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AblateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated modes.
    #[arg(long, default_value = "ir-only,b,o,b+o,o+i,b+o+i")]
    pub modes: String,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let flags = PartialConfig {
            manifest: self.manifest.clone(),
            model: self.model,
            mode: self.mode,
            m: self.m,
            t: self.t,
            lsi_rank: self.lsi_rank,
            pairs_dir: self.pairs_dir.clone(),
            out: self.out.clone(),
        };
        let file = self.config.as_deref().map(PartialConfig::load).transpose()?;
        RunConfig::resolve(flags, file)
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Trace(args) => cmd_trace(&args.resolve()?),
        Command::Eval(args) => {
            let cfg = args.run.resolve()?;
            cmd_eval(&cfg, args.ranked.as_deref(), args.compare.as_deref(), args.paired)
        }
        Command::Ablate(args) => {
            let cfg = args.run.resolve()?;
            cmd_ablate(&cfg, &parse_modes(&args.modes)?)
        }
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_owned(),
        source,
    })
}

fn write_file(path: &Path, body: &[u8]) -> Result<()> {
    fs::write(path, body).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut body = serde_json::to_vec_pretty(value).map_err(|source| Error::Json {
        path: path.to_owned(),
        source,
    })?;
    body.push(b'\n');
    write_file(path, &body)
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory");
    buf
}

fn load(cfg: &RunConfig) -> Result<crate::corpus::Dataset> {
    load_dataset(&cfg.manifest).map_err(|e| e.in_stage("load", None))
}

/// Writes `ranked_links.csv`, `paths.json` and `biterms.json`.
pub fn cmd_trace(cfg: &RunConfig) -> Result<()> {
    let dataset = load(cfg)?;
    let prepared = Prepared::new(&dataset, cfg.pairs_dir.as_deref())?;
    let out = run(&prepared, &cfg.pipeline())?;
    create_dir(&cfg.output_dir)?;
    write_file(
        &cfg.output_dir.join("ranked_links.csv"),
        &csv_bytes(|b| write_ranked_csv(b, &out.ranking)),
    )?;
    write_json(&cfg.output_dir.join("paths.json"), &paths_to_json(&out.paths))?;
    write_json(
        &cfg.output_dir.join("biterms.json"),
        &biterms_json(&prepared.filtered),
    )?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ComparisonOut {
    p_value: f64,
    delta: f64,
    category: crate::eval::EffectSize,
    test: &'static str,
}

/// Writes `report.json` and `pr_curve.csv`, plus `comparison.json` when a
/// second ranking is given.
pub fn cmd_eval(cfg: &RunConfig, ranked: Option<&Path>, other: Option<&Path>, paired: bool) -> Result<()> {
    let dataset = load(cfg)?;
    require_oracle(&dataset)?;
    let lists = match ranked {
        Some(p) => read_ranked_csv(p)?,
        None => {
            let prepared = Prepared::new(&dataset, cfg.pairs_dir.as_deref())?;
            run(&prepared, &cfg.pipeline())?.ranking
        }
    };
    let report = evaluate(&lists, &dataset.oracle_st)?;
    create_dir(&cfg.output_dir)?;
    write_json(&cfg.output_dir.join("report.json"), &report.rounded())?;
    write_file(
        &cfg.output_dir.join("pr_curve.csv"),
        &csv_bytes(|b| write_pr_csv(b, &report.pr_curve)),
    )?;
    if let Some(p) = other {
        let second = evaluate(&read_ranked_csv(p)?, &dataset.oracle_st)?;
        let StatComparison {
            p_value,
            delta,
            category,
        } = compare(&report.f_at_recall, &second.f_at_recall, paired)?;
        let out = ComparisonOut {
            p_value: round6(p_value),
            delta: round6(delta),
            category,
            test: if paired { "signed-rank" } else { "rank-sum" },
        };
        write_json(&cfg.output_dir.join("comparison.json"), &out)?;
    }
    Ok(())
}

/// Writes `report_<mode>.json` per mode and `summary.csv`.
pub fn cmd_ablate(cfg: &RunConfig, modes: &[Mode]) -> Result<()> {
    let dataset = load(cfg)?;
    let prepared = Prepared::new(&dataset, cfg.pairs_dir.as_deref())?;
    let reports = run_ablation(&prepared, &cfg.pipeline(), modes)?;
    create_dir(&cfg.output_dir)?;
    let mut summary = Vec::new();
    writeln!(summary, "mode,ap,map").expect("writing to memory");
    for (mode, report) in &reports {
        write_json(
            &cfg.output_dir.join(format!("report_{mode}.json")),
            &report.rounded(),
        )?;
        writeln!(summary, "{mode},{:.6},{:.6}", report.ap, report.map).expect("writing to memory");
    }
    write_file(&cfg.output_dir.join("summary.csv"), &summary)
}
