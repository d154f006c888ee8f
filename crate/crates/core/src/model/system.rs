//! The regularized linear system `M = I + (C_r L + C_s L') K` shared by the
//! dual matrix and the coefficient recovery.

use nalgebra::{DMatrix, DVector, Dyn, LU};

use super::{Hyperparameters, Label, QMatrix};
use crate::error::{Error, Result};
use crate::graph::Laplacian;
use crate::kernel::GramMatrix;

const JITTER: f64 = 1e-8;
const PIVOT_RATIO: f64 = 1e-14;
/// Relative residual bound for `M alpha = J'Y beta`.
pub const RESIDUAL_BOUND: f64 = 1e-8;

pub struct RegularizedSystem {
    m: DMatrix<f64>,
    lu: LU<f64, Dyn, Dyn>,
    jittered: bool,
}

fn near_singular(lu: &LU<f64, Dyn, Dyn>) -> bool {
    let u = lu.u();
    let diag = u.diagonal();
    let max = diag.amax();
    let min = diag.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    !(min > PIVOT_RATIO * max.max(1.0)) || !min.is_finite()
}

impl RegularizedSystem {
    pub fn new(k: &GramMatrix, l_agree: &Laplacian, l_graph: &Laplacian, c_r: f64, c_s: f64) -> Result<Self> {
        let n = k.n();
        for l in [l_agree, l_graph] {
            if l.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: l.n(),
                });
            }
        }
        let mut reg = DMatrix::<f64>::zeros(n, n);
        // zero-weight terms are skipped outright so they cannot leak into M
        if c_r != 0.0 {
            reg += l_agree.matrix() * c_r;
        }
        if c_s != 0.0 {
            reg += l_graph.matrix() * c_s;
        }
        let mut m = if c_r != 0.0 || c_s != 0.0 {
            reg * k.matrix()
        } else {
            DMatrix::zeros(n, n)
        };
        for i in 0..n {
            m[(i, i)] += 1.0;
        }

        let lu = m.clone().lu();
        if !near_singular(&lu) {
            return Ok(RegularizedSystem { m, lu, jittered: false });
        }
        for i in 0..n {
            m[(i, i)] += JITTER;
        }
        let lu = m.clone().lu();
        if near_singular(&lu) {
            return Err(Error::IllConditioned);
        }
        Ok(RegularizedSystem { m, lu, jittered: true })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Whether diagonal jitter had to be added.
    pub fn jittered(&self) -> bool {
        self.jittered
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    /// Solves `M X = B` with one round of iterative refinement.
    pub fn solve(&self, rhs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let mut x = self.lu.solve(rhs).ok_or(Error::IllConditioned)?;
        let r = rhs - &self.m * &x;
        let dx = self.lu.solve(&r).ok_or(Error::IllConditioned)?;
        x += dx;
        Ok(x)
    }

    /// `Q = Y J K M^-1 J' Y` for the first `labels.len()` samples.
    pub fn q_matrix(&self, k: &GramMatrix, labels: &[Label]) -> Result<QMatrix> {
        let n = self.n();
        let l = labels.len();
        if l > n {
            return Err(Error::DimensionMismatch { expected: n, got: l });
        }
        let jt = DMatrix::<f64>::identity(n, l);
        let z = self.solve(&jt)?;
        let jk = k.matrix().rows(0, l);
        let kz = jk * z;
        let y: Vec<f64> = labels.iter().map(|lab| lab.sign()).collect();
        let q = DMatrix::from_fn(l, l, |i, j| 0.5 * y[i] * y[j] * (kz[(i, j)] + kz[(j, i)]));
        Ok(QMatrix(q))
    }

    /// Right-hand side `J' Y beta` padded with zeros for unlabeled samples.
    pub fn rhs(&self, beta: &[f64], labels: &[Label]) -> DVector<f64> {
        let mut r = DVector::zeros(self.n());
        for (i, (b, y)) in beta.iter().zip(labels).enumerate() {
            r[i] = b * y.sign();
        }
        r
    }

    /// `|M alpha - rhs|_inf` and the bound it must meet.
    pub fn residual(&self, alpha: &DVector<f64>, rhs: &DVector<f64>) -> (f64, f64) {
        let r = (&self.m * alpha - rhs).amax();
        (r, RESIDUAL_BOUND * rhs.amax().max(1.0))
    }
}

pub fn build_q(
    k: &GramMatrix,
    l_agree: &Laplacian,
    l_graph: &Laplacian,
    hyper: &Hyperparameters,
    labels: &[Label],
) -> Result<QMatrix> {
    RegularizedSystem::new(k, l_agree, l_graph, hyper.c_r, hyper.c_s)?.q_matrix(k, labels)
}

/// Solves `M alpha = J'Y beta` and checks the residual bound.
pub fn recover_alpha(system: &RegularizedSystem, beta: &[f64], labels: &[Label]) -> Result<Vec<f64>> {
    if beta.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            got: beta.len(),
        });
    }
    let rhs = system.rhs(beta, labels);
    let rhs_m = DMatrix::from_column_slice(rhs.len(), 1, rhs.as_slice());
    let alpha = DVector::from_column_slice(system.solve(&rhs_m)?.as_slice());
    let (residual, bound) = system.residual(&alpha, &rhs);
    if residual > bound {
        return Err(Error::Residual { residual, bound });
    }
    Ok(alpha.as_slice().to_vec())
}
