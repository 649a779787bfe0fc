use std::collections::BTreeSet;

use serde::Serialize;

use super::NetError;
use crate::corpus::CoinRegistry;
use crate::econometrics::{pearson_pvalue, EconError};

/// Labelled square matrix; rows and columns share `labels`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SquareMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

/// Cosine similarity of tag-indicator vectors.
pub type SimilarityMatrix = SquareMatrix;

impl SquareMatrix {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        self.values.len() == n
            && self.values.iter().all(|r| r.len() == n)
            && (0..n).all(|i| (0..i).all(|j| self.values[i][j] == self.values[j][i]))
    }

    /// Strict upper triangle, row by row.
    pub fn upper_triangle(&self) -> Vec<f64> {
        let n = self.dim();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| self.values[i][j]).collect()
    }
}

/// `x_i·x_j / (|x_i| |x_j|)` over binary tag indicators, 0 when either coin
/// has no tags.
pub fn tag_similarity_matrix(registry: &CoinRegistry, coins: &[String]) -> Result<SimilarityMatrix, NetError> {
    let tags: Vec<BTreeSet<&str>> = coins
        .iter()
        .map(|c| {
            registry
                .get(c)
                .map(|e| e.tags.iter().map(String::as_str).collect())
                .ok_or_else(|| NetError::Input(format!("coin {c:?} is not in the registry")))
        })
        .collect::<Result<_, _>>()?;
    let n = coins.len();
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let (a, b) = (&tags[i], &tags[j]);
            let s = if a.is_empty() || b.is_empty() {
                0.0
            } else if i == j {
                1.0
            } else {
                a.intersection(b).count() as f64 / ((a.len() * b.len()) as f64).sqrt()
            };
            values[i][j] = s;
            values[j][i] = s;
        }
    }
    Ok(SquareMatrix { labels: coins.to_vec(), values })
}

/// Pearson correlation of the strict upper triangles of two symmetric
/// matrices with the same labels, with its two-sided p-value.
pub fn matrix_pearson(m1: &SquareMatrix, m2: &SquareMatrix) -> Result<(f64, f64), NetError> {
    if m1.labels != m2.labels {
        return Err(NetError::Input("matrices must share the same label order".into()));
    }
    if m1.dim() < 3 {
        return Err(NetError::Input(format!("matrices must be at least 3x3, got {0}x{0}", m1.dim())));
    }
    for (name, m) in [("first", m1), ("second", m2)] {
        if !m.is_symmetric() {
            return Err(NetError::Input(format!("{name} matrix is not symmetric")));
        }
    }
    let a = m1.upper_triangle();
    let b = m2.upper_triangle();
    let r = crate::econometrics::pearson(&a, &b).map_err(|e| match e {
        EconError::ZeroVariance(_) => NetError::Degenerate("constant off-diagonal entries".into()),
        other => NetError::Input(other.to_string()),
    })?;
    let p = pearson_pvalue(r, a.len()).map_err(|e| NetError::Input(e.to_string()))?;
    Ok((r, p))
}
