//! Feature-agreement matrix, heat-kernel adjacency and graph Laplacians.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::common_dim;
use crate::text::{Feature, FeatureVectorF1};

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphConfig {
    pub heat_t: f64,
    /// An edge is kept only when its weight is strictly above this value.
    pub edge_threshold: f64,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            heat_t: 1.0,
            edge_threshold: 0.1,
        }
    }
}

impl GraphConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.heat_t > 0.0 && self.heat_t.is_finite()) {
            return Err(Error::invalid(format!("heat_t must be positive, got {}", self.heat_t)));
        }
        if !(0.0..1.0).contains(&self.edge_threshold) {
            return Err(Error::invalid(format!(
                "edge_threshold must lie in [0, 1), got {}",
                self.edge_threshold
            )));
        }
        Ok(())
    }
}

/// `F[i][j]` = shared active indicators of i and j over 12.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementMatrix(pub DMatrix<f64>);

/// `L = D - W` for a symmetric weight matrix `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian(pub DMatrix<f64>);

impl Laplacian {
    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `f^T L f`.
    pub fn quadratic_form(&self, f: &[f64]) -> f64 {
        let f = nalgebra::DVector::from_column_slice(f);
        f.dot(&(&self.0 * &f))
    }
}

pub fn agreement_matrix(f1_vectors: &[FeatureVectorF1]) -> Result<AgreementMatrix> {
    if f1_vectors.is_empty() {
        return Err(Error::invalid("agreement matrix needs at least one sample"));
    }
    let n = f1_vectors.len();
    let nf = Feature::COUNT as f64;
    let m = DMatrix::from_fn(n, n, |i, j| f1_vectors[i].dot(&f1_vectors[j]) as f64 / nf);
    Ok(AgreementMatrix(m))
}

/// Thresholded heat-kernel weights `exp(-|xi - xj|^2 / 4t)` with a zero
/// diagonal.
pub fn heat_adjacency(vectors: &[Vec<f64>], cfg: &GraphConfig) -> Result<DMatrix<f64>> {
    cfg.validate()?;
    common_dim(vectors)?;
    let n = vectors.len();
    let denom = 4.0 * cfg.heat_t;
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    let d2: f64 = vectors[i]
                        .iter()
                        .zip(&vectors[j])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    let w = (-d2 / denom).exp();
                    if w > cfg.edge_threshold {
                        w
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let mut a = DMatrix::zeros(n, n);
    for (i, row) in upper.iter().enumerate() {
        for (k, &w) in row.iter().enumerate() {
            let j = i + 1 + k;
            a[(i, j)] = w;
            a[(j, i)] = w;
        }
    }
    Ok(a)
}

pub fn laplacian(weights: &DMatrix<f64>) -> Result<Laplacian> {
    if !weights.is_square() {
        return Err(Error::DimensionMismatch {
            expected: weights.nrows(),
            got: weights.ncols(),
        });
    }
    let asym = (weights - weights.transpose()).amax();
    if asym > SYMMETRY_TOL {
        return Err(Error::Asymmetric(asym));
    }
    let mut l = -weights.clone();
    for i in 0..weights.nrows() {
        l[(i, i)] += weights.row(i).sum();
    }
    Ok(Laplacian(l))
}
