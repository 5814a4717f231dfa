use std::collections::BTreeSet;

use crate::corpus::Document;

/// Uniform smoothing mass added to every term of the joint vocabulary.
const EPSILON: f64 = 1e-9;

/// Jensen-Shannon divergence in bits between two distributions on the same
/// support. Terms with zero probability contribute nothing.
pub fn jensen_shannon_divergence(p: &[f64], q: &[f64]) -> f64 {
    let mut kl_pm = 0.0;
    let mut kl_qm = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        let mi = 0.5 * (pi + qi);
        if pi > 0.0 {
            kl_pm += pi * (pi / mi).log2();
        }
        if qi > 0.0 {
            kl_qm += qi * (qi / mi).log2();
        }
    }
    0.5 * kl_pm + 0.5 * kl_qm
}

/// `1 - JSD` between the smoothed term distributions of two documents.
/// Zero if either document is empty.
pub fn similarity_js(a: &Document, b: &Document) -> f64 {
    let (ta, tb) = (a.weighted_terms(), b.weighted_terms());
    let total_a: u64 = ta.values().map(|&c| c as u64).sum();
    let total_b: u64 = tb.values().map(|&c| c as u64).sum();
    if total_a == 0 || total_b == 0 {
        return 0.0;
    }
    let vocab: BTreeSet<&String> = ta.keys().chain(tb.keys()).collect();
    let norm = 1.0 + EPSILON * vocab.len() as f64;
    let dist = |terms: &crate::corpus::TermCounts, total: u64| -> Vec<f64> {
        vocab
            .iter()
            .map(|t| {
                let c = terms.get(*t).copied().unwrap_or(0) as f64;
                (c / total as f64 + EPSILON) / norm
            })
            .collect()
    };
    let p = dist(&ta, total_a);
    let q = dist(&tb, total_b);
    (1.0 - jensen_shannon_divergence(&p, &q)).clamp(0.0, 1.0)
}
