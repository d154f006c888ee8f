//! Kernel functions and Gram assembly.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    #[default]
    Linear,
    Rbf { gamma: f64 },
}

impl KernelSpec {
    pub fn rbf(gamma: f64) -> Result<Self> {
        if gamma > 0.0 && gamma.is_finite() {
            Ok(KernelSpec::Rbf { gamma })
        } else {
            Err(Error::invalid(format!("rbf gamma must be positive, got {gamma}")))
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Rbf { gamma } => Self::rbf(gamma).map(|_| ()),
        }
    }

    /// Evaluates k(a, b). Callers guarantee equal lengths.
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            KernelSpec::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            KernelSpec::Rbf { gamma } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-gamma * d2).exp()
            }
        }
    }
}

/// Symmetric kernel matrix over a sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(pub DMatrix<f64>);

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

pub(crate) fn common_dim(samples: &[Vec<f64>]) -> Result<usize> {
    let dim = samples.first().map_or(0, Vec::len);
    for s in samples {
        if s.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: s.len(),
            });
        }
    }
    Ok(dim)
}

pub fn gram(samples: &[Vec<f64>], spec: &KernelSpec) -> Result<GramMatrix> {
    spec.validate()?;
    common_dim(samples)?;
    let n = samples.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..=i).map(|j| spec.eval(&samples[i], &samples[j])).collect())
        .collect();
    let mut k = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    Ok(GramMatrix(k))
}

pub fn kernel_row(x: &[f64], training: &[Vec<f64>], spec: &KernelSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    training
        .iter()
        .map(|t| {
            if t.len() != x.len() {
                Err(Error::DimensionMismatch {
                    expected: t.len(),
                    got: x.len(),
                })
            } else {
                Ok(spec.eval(x, t))
            }
        })
        .collect()
}
