//! Wilcoxon tests and Cliff's delta.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Combined sample size up to which rank-sum p-values are exact.
pub const EXACT_RANK_SUM_LIMIT: usize = 30;
/// Nonzero pairs up to which signed-rank p-values are exact.
pub const EXACT_SIGNED_RANK_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EffectSize {
    Negligible,
    Small,
    Medium,
    Large,
}

impl EffectSize {
    pub fn of(delta: f64) -> Self {
        if delta < 0.15 {
            EffectSize::Negligible
        } else if delta < 0.33 {
            EffectSize::Small
        } else if delta < 0.47 {
            EffectSize::Medium
        } else {
            EffectSize::Large
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatComparison {
    pub p_value: f64,
    pub delta: f64,
    pub category: EffectSize,
}

/// Midranks (1-based, ties share their average) of `values`, doubled so
/// they stay integral.
fn doubled_midranks(values: &[f64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0u64; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // ranks i+1..=j+1 average to (i+j+2)/2
        for &k in &order[i..=j] {
            ranks[k] = (i + j + 2) as u64;
        }
        i = j + 1;
    }
    ranks
}

/// Sum over tie groups of `t^3 - t`.
fn tie_term(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut sum = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&x| x == sorted[i]).count();
        let t = j as f64;
        sum += t * t * t - t;
        i += j;
    }
    sum
}

fn two_sided_normal(z: f64) -> f64 {
    let n = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * n.sf(z.abs())).min(1.0)
}

/// Two-sided Wilcoxon rank-sum p-value. Exact (with midranks) when the
/// combined size is at most [`EXACT_RANK_SUM_LIMIT`], otherwise the
/// tie-corrected normal approximation.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Evaluation(
            "rank-sum test needs two nonempty samples".into(),
        ));
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    if pooled.iter().all(|x| *x == pooled[0]) {
        return Ok(1.0);
    }
    let (n1, n2) = (a.len(), b.len());
    let n = n1 + n2;
    let ranks = doubled_midranks(&pooled);
    let w2: u64 = ranks[..n1].iter().sum();
    // doubled mean of W is n1 (n + 1)
    let mu2 = (n1 * (n + 1)) as i64;
    let observed = (w2 as i64 - mu2).abs();

    if n <= EXACT_RANK_SUM_LIMIT {
        let total: u64 = ranks.iter().sum();
        let counts = subset_sum_counts(&ranks, n1, total as usize);
        let all: f64 = counts.iter().sum();
        let extreme: f64 = counts
            .iter()
            .enumerate()
            .filter(|(s, _)| (*s as i64 - mu2).abs() >= observed)
            .map(|(_, c)| c)
            .sum();
        return Ok((extreme / all).min(1.0));
    }

    let (n1f, n2f, nf) = (n1 as f64, n2 as f64, n as f64);
    let var = n1f * n2f / 12.0 * ((nf + 1.0) - tie_term(&pooled) / (nf * (nf - 1.0)));
    if var <= 0.0 {
        return Ok(1.0);
    }
    let z = (w2 as f64 / 2.0 - n1f * (nf + 1.0) / 2.0) / var.sqrt();
    Ok(two_sided_normal(z))
}

/// Number of `k`-element subsets of `items` for every possible sum.
fn subset_sum_counts(items: &[u64], k: usize, max_sum: usize) -> Vec<f64> {
    // dp[j][s]: subsets of size j with sum s
    let mut dp = vec![vec![0.0f64; max_sum + 1]; k + 1];
    dp[0][0] = 1.0;
    for &x in items {
        let x = x as usize;
        for j in (1..=k).rev() {
            let (lo, hi) = dp.split_at_mut(j);
            let prev = &lo[j - 1];
            let cur = &mut hi[0];
            for s in (x..=max_sum).rev() {
                cur[s] += prev[s - x];
            }
        }
    }
    dp.swap_remove(k)
}

/// Two-sided Wilcoxon signed-rank p-value for paired samples. Zero
/// differences are dropped.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Evaluation(
            "signed-rank test needs two nonempty samples of equal length".into(),
        ));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Ok(1.0);
    }
    let n = diffs.len();
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = doubled_midranks(&abs);
    let total: u64 = ranks.iter().sum();
    let wplus2: u64 = ranks
        .iter()
        .zip(&diffs)
        .filter(|(_, d)| **d > 0.0)
        .map(|(r, _)| r)
        .sum();
    // doubled mean of W+ is half the doubled rank total
    let observed = (2 * wplus2 as i64 - total as i64).abs();

    if n <= EXACT_SIGNED_RANK_LIMIT {
        let mut counts = vec![0.0f64; total as usize + 1];
        counts[0] = 1.0;
        for &r in &ranks {
            for s in (r as usize..=total as usize).rev() {
                counts[s] += counts[s - r as usize];
            }
        }
        let all: f64 = counts.iter().sum();
        let extreme: f64 = counts
            .iter()
            .enumerate()
            .filter(|(s, _)| (2 * *s as i64 - total as i64).abs() >= observed)
            .map(|(_, c)| c)
            .sum();
        return Ok((extreme / all).min(1.0));
    }

    let nf = n as f64;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term(&abs) / 48.0;
    if var <= 0.0 {
        return Ok(1.0);
    }
    let z = (wplus2 as f64 / 2.0 - total as f64 / 4.0) / var.sqrt();
    Ok(two_sided_normal(z))
}

/// Absolute Cliff's delta with its magnitude category.
pub fn cliffs_delta(a: &[f64], b: &[f64]) -> Result<(f64, EffectSize)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Evaluation(
            "Cliff's delta needs two nonempty samples".into(),
        ));
    }
    let mut sorted = b.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut dominance: i64 = 0;
    for x in a {
        let below = sorted.partition_point(|y| y < x) as i64;
        let not_above = sorted.partition_point(|y| y <= x) as i64;
        let above = sorted.len() as i64 - not_above;
        dominance += below - above;
    }
    let delta = dominance.unsigned_abs() as f64 / (a.len() * b.len()) as f64;
    Ok((delta, EffectSize::of(delta)))
}

/// Rank-sum (or signed-rank when `paired`) p-value plus Cliff's delta.
pub fn compare(a: &[f64], b: &[f64], paired: bool) -> Result<StatComparison> {
    let p_value = if paired {
        wilcoxon_signed_rank(a, b)?
    } else {
        wilcoxon_rank_sum(a, b)?
    };
    let (delta, category) = cliffs_delta(a, b)?;
    Ok(StatComparison {
        p_value,
        delta,
        category,
    })
}
