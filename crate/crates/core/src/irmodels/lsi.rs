//! Latent semantic indexing on a dense, deterministic SVD.
//!
//! Tall matrices (more terms than documents) are first reduced to their
//! `n x n` triangular factor by Householder QR, which leaves the right
//! singular vectors and singular values unchanged. The singular value
//! decomposition itself is one-sided (Hestenes) Jacobi.

use super::vsm::cosine;
use super::TermDocMatrix;
use crate::error::{Error, Result};

const ROTATION_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 80;

/// Singular values in descending order with the matching right singular
/// vectors; `v[i]` is the vector for `sigma[i]`, indexed by document.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub sigma: Vec<f64>,
    pub v: Vec<Vec<f64>>,
}

/// Upper-triangular factor `R` of `A = QR`, returned column-wise.
fn householder_r(columns: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = columns.len();
    let m = columns[0].len();
    let mut a: Vec<Vec<f64>> = columns.to_vec();
    let mut v = vec![0.0; m];
    for k in 0..n.min(m) {
        let norm = a[k][k..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k][k] >= 0.0 { -norm } else { norm };
        v[k..].copy_from_slice(&a[k][k..]);
        v[k] -= alpha;
        let vnorm2: f64 = v[k..].iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for col in a.iter_mut().skip(k) {
            let dot: f64 = v[k..].iter().zip(&col[k..]).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vi) in col[k..].iter_mut().zip(&v[k..]) {
                *c -= f * vi;
            }
        }
    }
    a.into_iter()
        .enumerate()
        .map(|(j, col)| {
            let mut r = col[..n.min(m)].to_vec();
            for x in r.iter_mut().skip(j + 1) {
                *x = 0.0;
            }
            r
        })
        .collect()
}

/// Thin SVD of a matrix given as columns (one per document).
pub fn thin_svd(columns: &[Vec<f64>]) -> Result<Svd> {
    let n = columns.len();
    if n == 0 {
        return Err(Error::Numeric("SVD of an empty matrix".into()));
    }
    let m = columns[0].len();
    let mut w = if m > n {
        householder_r(columns)
    } else {
        columns.to_vec()
    };
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();

    // columns this small are numerically zero and need no orthogonalization
    let frob2: f64 = w.iter().flatten().map(|x| x * x).sum();
    let negligible = frob2 * (f64::EPSILON * f64::EPSILON);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = w[p].iter().map(|x| x * x).sum();
                let beta: f64 = w[q].iter().map(|x| x * x).sum();
                let gamma: f64 = w[p].iter().zip(&w[q]).map(|(x, y)| x * y).sum();
                if alpha <= negligible
                    || beta <= negligible
                    || gamma.abs() <= ROTATION_TOL * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "Jacobi SVD did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let sigma: Vec<f64> = w
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));
    Ok(Svd {
        sigma: order.iter().map(|&i| sigma[i]).collect(),
        v: order.iter().map(|&i| v[i].clone()).collect(),
    })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// `max(2, floor(0.3 * docs))`, capped at `min(terms, docs)`.
pub fn default_rank(matrix: &TermDocMatrix) -> usize {
    let k = ((matrix.n_docs() as f64) * 0.3).floor() as usize;
    k.max(2).min(matrix.n_terms().min(matrix.n_docs())).max(1)
}

/// Documents projected into the rank-`k` latent space (rows of `V_k`
/// scaled by `Sigma_k`).
#[derive(Debug, Clone)]
pub struct LsiSpace {
    pub rank: usize,
    pub coords: Vec<Vec<f64>>,
    doc_ids: Vec<String>,
}

impl LsiSpace {
    pub fn new(matrix: &TermDocMatrix, k: usize) -> Result<Self> {
        let max_k = matrix.n_terms().min(matrix.n_docs());
        if k == 0 || k > max_k {
            return Err(Error::Config(format!(
                "LSI rank {k} outside 1..={max_k} for a {}x{} matrix",
                matrix.n_terms(),
                matrix.n_docs()
            )));
        }
        let svd = thin_svd(&matrix.columns)?;
        let coords = (0..matrix.n_docs())
            .map(|d| (0..k).map(|i| svd.v[i][d] * svd.sigma[i]).collect())
            .collect();
        Ok(LsiSpace {
            rank: k,
            coords,
            doc_ids: matrix.doc_ids.clone(),
        })
    }

    /// Cosine in latent space, negative values clamped to zero.
    pub fn similarity_at(&self, i: usize, j: usize) -> f64 {
        cosine(&self.coords[i], &self.coords[j]).clamp(0.0, 1.0)
    }

    pub fn similarity(&self, a: &str, b: &str) -> Result<f64> {
        let pos = |id: &str| {
            self.doc_ids
                .iter()
                .position(|d| d == id)
                .ok_or_else(|| Error::Lookup(id.to_owned()))
        };
        Ok(self.similarity_at(pos(a)?, pos(b)?))
    }
}

pub fn similarity_lsi(matrix: &TermDocMatrix, k: usize, a: &str, b: &str) -> Result<f64> {
    LsiSpace::new(matrix, k)?.similarity(a, b)
}
