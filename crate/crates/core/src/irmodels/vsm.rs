use super::TermDocMatrix;
use crate::error::Result;

/// Cosine of two equal-length vectors; zero when either is all-zero.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na.sqrt() * nb.sqrt())
}

pub fn similarity_vsm(matrix: &TermDocMatrix, a: &str, b: &str) -> Result<f64> {
    Ok(cosine(matrix.column(a)?, matrix.column(b)?).clamp(0.0, 1.0))
}
