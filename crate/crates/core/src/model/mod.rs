//! The semi-supervised learner: dual matrix assembly, QP, coefficient
//! recovery, bias, and the kernel-expansion decision function.
//!
//! With `C_r = C_s = 0` the learner reduces to a soft-margin SVM on the
//! labeled samples; with `C_r = 0` it is a Laplacian SVM.

mod persist;
mod qp;
mod system;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub use persist::{load_model, read_model, save_model, write_model, MODEL_VERSION};
pub use qp::{dual_objective, solve_dual, solve_dual_with, DualSolution, SolverOptions};
pub use system::{build_q, recover_alpha, RegularizedSystem, RESIDUAL_BOUND};

use crate::error::{Error, Result};
use crate::graph::{agreement_matrix, heat_adjacency, laplacian, GraphConfig, Laplacian};
use crate::kernel::{gram, kernel_row, GramMatrix, KernelSpec};
use crate::text::FeatureVectorF1;

/// Margin support vectors are those with `MARGIN_TOL < beta < C_l - MARGIN_TOL`.
pub const MARGIN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Pos => 1.0,
            Label::Neg => -1.0,
        }
    }

    pub fn from_sign(v: f64) -> Self {
        if v > 0.0 {
            Label::Pos
        } else {
            Label::Neg
        }
    }

    pub fn is_pos(self) -> bool {
        self == Label::Pos
    }
}

impl From<Label> for i8 {
    fn from(l: Label) -> i8 {
        match l {
            Label::Pos => 1,
            Label::Neg => -1,
        }
    }
}

impl TryFrom<i8> for Label {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Label::Pos),
            -1 => Ok(Label::Neg),
            other => Err(format!("label must be +1 or -1, got {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    /// Hinge-loss weight on labeled samples.
    pub c_l: f64,
    /// Weight of the feature-agreement smoothness penalty.
    pub c_r: f64,
    /// Weight of the intrinsic-graph smoothness penalty, already scaled.
    pub c_s: f64,
    pub kernel: KernelSpec,
    pub graph: GraphConfig,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            c_l: 0.6,
            c_r: 0.2,
            c_s: 0.2,
            kernel: KernelSpec::Linear,
            graph: GraphConfig::default(),
        }
    }
}

impl Hyperparameters {
    pub fn new(c_l: f64, c_r: f64, c_s: f64) -> Result<Self> {
        let h = Hyperparameters {
            c_l,
            c_r,
            c_s,
            ..Default::default()
        };
        h.validate()?;
        Ok(h)
    }

    /// Sets `C_s = gamma_i / (l + u)^2`.
    pub fn with_gamma_i(c_l: f64, c_r: f64, gamma_i: f64, n_total: usize) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::invalid("sample count must be positive"));
        }
        Self::new(c_l, c_r, gamma_i / (n_total as f64).powi(2))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c_l > 0.0 && self.c_l.is_finite()) {
            return Err(Error::invalid("C_l must be positive"));
        }
        if !(self.c_r >= 0.0 && self.c_r.is_finite()) {
            return Err(Error::invalid("C_r must be non-negative"));
        }
        if !(self.c_s >= 0.0 && self.c_s.is_finite()) {
            return Err(Error::invalid("C_s must be non-negative"));
        }
        self.kernel.validate()?;
        self.graph.validate()
    }
}

/// Dense `l x l` dual matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix(pub DMatrix<f64>);

/// Everything the optimizer needs, indexed so that labeled samples come first.
#[derive(Debug, Clone)]
pub struct Problem {
    pub gram: GramMatrix,
    pub l_agree: Laplacian,
    pub l_graph: Laplacian,
}

impl Problem {
    pub fn assemble(
        samples: &[Vec<f64>],
        f1_vectors: &[FeatureVectorF1],
        f2_vectors: &[Vec<f64>],
        hyper: &Hyperparameters,
    ) -> Result<Self> {
        let n = samples.len();
        for got in [f1_vectors.len(), f2_vectors.len()] {
            if got != n {
                return Err(Error::DimensionMismatch { expected: n, got });
            }
        }
        let l_agree = laplacian(&agreement_matrix(f1_vectors)?.0)?;
        let l_graph = laplacian(&heat_adjacency(f2_vectors, &hyper.graph)?)?;
        let gram = gram(samples, &hyper.kernel)?;
        Ok(Problem { gram, l_agree, l_graph })
    }

    pub fn n(&self) -> usize {
        self.gram.n()
    }

    /// Reorders every matrix so that new index `i` is old index `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let p = |m: &DMatrix<f64>| DMatrix::from_fn(order.len(), order.len(), |i, j| m[(order[i], order[j])]);
        Problem {
            gram: GramMatrix(p(self.gram.matrix())),
            l_agree: Laplacian(p(self.l_agree.matrix())),
            l_graph: Laplacian(p(self.l_graph.matrix())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub dual_objective: f64,
    pub kkt_violation: f64,
    pub iterations: usize,
    pub linear_residual: f64,
    pub residual_bound: f64,
    pub jittered: bool,
}

/// Result of optimizing an assembled problem.
#[derive(Debug, Clone)]
pub struct Fit {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub dual: DualSolution,
    /// `K alpha + b` over all `l + u` samples.
    pub transductive: Vec<f64>,
    pub diagnostics: Diagnostics,
}

pub(crate) fn check_labels(labels: &[Label]) -> Result<()> {
    if labels.len() < 2 {
        return Err(Error::DegenerateLabels(format!(
            "need at least 2 labeled samples, got {}",
            labels.len()
        )));
    }
    let pos = labels.iter().filter(|l| l.is_pos()).count();
    if pos == 0 || pos == labels.len() {
        return Err(Error::DegenerateLabels("both classes must be present".into()));
    }
    Ok(())
}

/// Bias from margin support vectors, or the midpoint rule when every
/// multiplier sits at a bound. `f_plain` holds `K alpha` on the labeled
/// samples.
pub fn compute_bias(f_plain: &[f64], beta: &[f64], labels: &[Label], c_l: f64) -> f64 {
    let margin: Vec<f64> = beta
        .iter()
        .zip(labels)
        .zip(f_plain)
        .filter(|((&b, _), _)| b > MARGIN_TOL && b < c_l - MARGIN_TOL)
        .map(|((_, y), f)| y.sign() - f)
        .collect();
    if !margin.is_empty() {
        return margin.iter().sum::<f64>() / margin.len() as f64;
    }
    let max_neg = labels
        .iter()
        .zip(f_plain)
        .filter(|(y, _)| !y.is_pos())
        .map(|(_, &f)| f)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_pos = labels
        .iter()
        .zip(f_plain)
        .filter(|(y, _)| y.is_pos())
        .map(|(_, &f)| f)
        .fold(f64::INFINITY, f64::min);
    if max_neg.is_finite() && min_pos.is_finite() {
        -0.5 * (max_neg + min_pos)
    } else {
        0.0
    }
}

/// Optimizes an assembled problem whose first `labels.len()` samples are labeled.
pub fn fit(problem: &Problem, labels: &[Label], hyper: &Hyperparameters, opts: &SolverOptions) -> Result<Fit> {
    hyper.validate()?;
    check_labels(labels)?;
    let l = labels.len();
    if l > problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            got: l,
        });
    }
    let system = RegularizedSystem::new(&problem.gram, &problem.l_agree, &problem.l_graph, hyper.c_r, hyper.c_s)?;
    let q = system.q_matrix(&problem.gram, labels)?;
    let dual = solve_dual_with(&q, labels, hyper.c_l, opts)?;

    let rhs = system.rhs(&dual.beta, labels);
    let alpha = recover_alpha(&system, &dual.beta, labels)?;
    let (linear_residual, residual_bound) = system.residual(&DVector::from_column_slice(&alpha), &rhs);

    let f_plain = problem.gram.matrix() * DVector::from_column_slice(&alpha);
    let bias = compute_bias(&f_plain.as_slice()[..l], &dual.beta, labels, hyper.c_l);
    let transductive = f_plain.iter().map(|f| f + bias).collect();

    let diagnostics = Diagnostics {
        dual_objective: dual.objective,
        kkt_violation: dual.kkt_violation,
        iterations: dual.iterations,
        linear_residual,
        residual_bound,
        jittered: system.jittered(),
    };
    Ok(Fit {
        alpha,
        bias,
        dual,
        transductive,
        diagnostics,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    /// Expansion coefficients over all `l + u` training samples.
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub training_inputs: Vec<Vec<f64>>,
    pub hyper: Hyperparameters,
    /// Labels of the first `labels.len()` training samples.
    pub labels: Vec<Label>,
    pub ids: Vec<String>,
    pub diagnostics: Diagnostics,
}

impl TrainedModel {
    pub fn n_labeled(&self) -> usize {
        self.labels.len()
    }

    pub fn n_unlabeled(&self) -> usize {
        self.alpha.len() - self.labels.len()
    }

    pub fn with_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.alpha.len() {
            return Err(Error::DimensionMismatch {
                expected: self.alpha.len(),
                got: ids.len(),
            });
        }
        self.ids = ids;
        Ok(self)
    }
}

/// Trains on `samples` where the first `labels.len()` entries are labeled.
pub fn train(
    samples: &[Vec<f64>],
    labels: &[Label],
    hyper: &Hyperparameters,
    f1_vectors: &[FeatureVectorF1],
    f2_vectors: &[Vec<f64>],
) -> Result<TrainedModel> {
    train_with(samples, labels, hyper, f1_vectors, f2_vectors, &SolverOptions::default())
}

pub fn train_with(
    samples: &[Vec<f64>],
    labels: &[Label],
    hyper: &Hyperparameters,
    f1_vectors: &[FeatureVectorF1],
    f2_vectors: &[Vec<f64>],
    opts: &SolverOptions,
) -> Result<TrainedModel> {
    hyper.validate()?;
    check_labels(labels)?;
    if labels.len() > samples.len() {
        return Err(Error::DimensionMismatch {
            expected: samples.len(),
            got: labels.len(),
        });
    }
    let problem = Problem::assemble(samples, f1_vectors, f2_vectors, hyper)?;
    let fit = fit(&problem, labels, hyper, opts)?;
    Ok(TrainedModel {
        alpha: fit.alpha,
        bias: fit.bias,
        training_inputs: samples.to_vec(),
        hyper: *hyper,
        labels: labels.to_vec(),
        ids: (0..samples.len()).map(|i| i.to_string()).collect(),
        diagnostics: fit.diagnostics,
    })
}

/// `sum_i alpha_i k(x, x_i) + b`.
pub fn decision(model: &TrainedModel, x: &[f64]) -> Result<f64> {
    let row = kernel_row(x, &model.training_inputs, &model.hyper.kernel)?;
    Ok(row.iter().zip(&model.alpha).map(|(k, a)| k * a).sum::<f64>() + model.bias)
}

/// `+1` iff the decision value is strictly positive.
pub fn predict(model: &TrainedModel, x: &[f64]) -> Result<Label> {
    decision(model, x).map(Label::from_sign)
}
