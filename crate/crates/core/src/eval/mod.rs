//! Retrieval metrics, statistical comparison and the ablation harness.

pub mod metrics;
pub mod stats;

use crate::corpus::Dataset;
use crate::error::{Error, Result};
use crate::pipeline::{run, Mode, PipelineConfig, Prepared};

pub use metrics::{
    average_precision, evaluate, f_at_recall, global_ranking, mean_average_precision, per_query_ap,
    precision_recall, write_pr_csv, EvalReport, PrPoint,
};
pub use stats::{cliffs_delta, compare, wilcoxon_rank_sum, wilcoxon_signed_rank, EffectSize, StatComparison};

/// Runs each mode over shared preprocessing and evaluates it against the
/// source-target oracle.
pub fn run_ablation(
    prepared: &Prepared,
    base: &PipelineConfig,
    modes: &[Mode],
) -> Result<Vec<(Mode, EvalReport)>> {
    if modes.is_empty() {
        return Err(Error::Config("no ablation modes given".into()));
    }
    require_oracle(prepared.dataset)?;
    modes
        .iter()
        .map(|&mode| {
            let out = run(prepared, &PipelineConfig { mode, ..base.clone() })?;
            let report =
                evaluate(&out.ranking, &prepared.dataset.oracle_st).map_err(|e| e.in_stage("eval", None))?;
            Ok((mode, report))
        })
        .collect()
}

pub fn require_oracle(dataset: &Dataset) -> Result<()> {
    if dataset.oracle_st.is_empty() {
        return Err(Error::Config("the dataset has no source-target oracle".into()));
    }
    Ok(())
}
