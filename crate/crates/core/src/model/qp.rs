//! Dual QP solver: maximize `-1/2 b'Qb + sum(b)` subject to `y'b = 0` and
//! `0 <= b_i <= C`.
//!
//! Pairwise coordinate ascent (SMO) with second-order working-set
//! selection. Each step moves two multipliers along the equality
//! constraint, clips to the box, and never decreases the dual objective.

use super::{Label, QMatrix};
use crate::error::{Error, Result};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Bound on the maximal violating-pair gap at exit.
    pub tol: f64,
    pub max_iter: usize,
    /// Record the dual objective after every iteration.
    pub record_trace: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            max_iter: 1_000_000,
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub beta: Vec<f64>,
    pub objective: f64,
    /// `max_{i in I_up} -y_i g_i - min_{j in I_low} -y_j g_j`, clipped at 0,
    /// with `g = Q beta - 1`. Zero iff beta satisfies the KKT conditions.
    pub kkt_violation: f64,
    pub iterations: usize,
    /// Objective after each iteration, starting from beta = 0. Empty unless
    /// requested.
    pub trace: Vec<f64>,
}

/// Dual objective `-1/2 b'Qb + sum(b)`.
pub fn dual_objective(q: &QMatrix, beta: &[f64]) -> f64 {
    let n = beta.len();
    let mut quad = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += q.0[(i, j)] * beta[j];
        }
        quad += beta[i] * row;
    }
    -0.5 * quad + beta.iter().sum::<f64>()
}

pub fn solve_dual(q: &QMatrix, labels: &[Label], c_l: f64, tol: f64) -> Result<DualSolution> {
    solve_dual_with(
        q,
        labels,
        c_l,
        &SolverOptions {
            tol,
            ..SolverOptions::default()
        },
    )
}

struct Smo<'a> {
    q: &'a QMatrix,
    y: Vec<f64>,
    c: f64,
    beta: Vec<f64>,
    grad: Vec<f64>,
}

impl<'a> Smo<'a> {
    fn in_up(&self, t: usize) -> bool {
        if self.y[t] > 0.0 {
            self.beta[t] < self.c
        } else {
            self.beta[t] > 0.0
        }
    }

    fn in_low(&self, t: usize) -> bool {
        if self.y[t] > 0.0 {
            self.beta[t] > 0.0
        } else {
            self.beta[t] < self.c
        }
    }

    fn violation(&self) -> f64 {
        let mut up = f64::NEG_INFINITY;
        let mut low = f64::INFINITY;
        for t in 0..self.beta.len() {
            let v = -self.y[t] * self.grad[t];
            if self.in_up(t) {
                up = up.max(v);
            }
            if self.in_low(t) {
                low = low.min(v);
            }
        }
        if up.is_finite() && low.is_finite() {
            (up - low).max(0.0)
        } else {
            0.0
        }
    }

    fn refresh_gradient(&mut self) {
        let n = self.beta.len();
        for i in 0..n {
            let mut g = -1.0;
            for j in 0..n {
                g += self.q.0[(i, j)] * self.beta[j];
            }
            self.grad[i] = g;
        }
    }

    fn objective_from_gradient(&self) -> f64 {
        0.5 * self
            .beta
            .iter()
            .zip(&self.grad)
            .map(|(b, g)| b * (1.0 - g))
            .sum::<f64>()
    }

    /// Second-order working-set selection; `None` once the gap is within tol.
    fn select(&self, tol: f64) -> Option<(usize, usize)> {
        let n = self.beta.len();
        let mut i = None;
        let mut g_max = f64::NEG_INFINITY;
        for t in 0..n {
            if self.in_up(t) {
                let v = -self.y[t] * self.grad[t];
                if v > g_max {
                    g_max = v;
                    i = Some(t);
                }
            }
        }
        let i = i?;

        let mut j = None;
        let mut g_min = f64::INFINITY;
        let mut best = f64::INFINITY;
        for t in 0..n {
            if !self.in_low(t) {
                continue;
            }
            let v = -self.y[t] * self.grad[t];
            g_min = g_min.min(v);
            let b = g_max - v;
            if b > 0.0 {
                let a = self.q.0[(i, i)] + self.q.0[(t, t)] - 2.0 * self.y[i] * self.y[t] * self.q.0[(i, t)];
                let a = if a > 0.0 { a } else { TAU };
                let score = -(b * b) / a;
                if score < best {
                    best = score;
                    j = Some(t);
                }
            }
        }
        if g_max - g_min <= tol {
            return None;
        }
        j.map(|j| (i, j))
    }

    fn step(&mut self, i: usize, j: usize) {
        let q = &self.q.0;
        let c = self.c;
        let (old_i, old_j) = (self.beta[i], self.beta[j]);
        let (mut bi, mut bj) = (old_i, old_j);
        if self.y[i] != self.y[j] {
            let mut quad = q[(i, i)] + q[(j, j)] + 2.0 * q[(i, j)];
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-self.grad[i] - self.grad[j]) / quad;
            let diff = bi - bj;
            bi += delta;
            bj += delta;
            if diff > 0.0 {
                if bj < 0.0 {
                    bj = 0.0;
                    bi = diff;
                }
            } else if bi < 0.0 {
                bi = 0.0;
                bj = -diff;
            }
            if diff > 0.0 {
                if bi > c {
                    bi = c;
                    bj = c - diff;
                }
            } else if bj > c {
                bj = c;
                bi = c + diff;
            }
        } else {
            let mut quad = q[(i, i)] + q[(j, j)] - 2.0 * q[(i, j)];
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (self.grad[i] - self.grad[j]) / quad;
            let sum = bi + bj;
            bi -= delta;
            bj += delta;
            if sum > c {
                if bi > c {
                    bi = c;
                    bj = sum - c;
                }
            } else if bj < 0.0 {
                bj = 0.0;
                bi = sum;
            }
            if sum > c {
                if bj > c {
                    bj = c;
                    bi = sum - c;
                }
            } else if bi < 0.0 {
                bi = 0.0;
                bj = sum;
            }
        }
        bi = bi.clamp(0.0, c);
        bj = bj.clamp(0.0, c);
        let (di, dj) = (bi - old_i, bj - old_j);
        self.beta[i] = bi;
        self.beta[j] = bj;
        for t in 0..self.grad.len() {
            self.grad[t] += q[(t, i)] * di + q[(t, j)] * dj;
        }
    }
}

pub fn solve_dual_with(q: &QMatrix, labels: &[Label], c_l: f64, opts: &SolverOptions) -> Result<DualSolution> {
    let n = labels.len();
    if q.0.nrows() != n || q.0.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: q.0.nrows(),
        });
    }
    if !(c_l > 0.0 && c_l.is_finite()) {
        return Err(Error::invalid(format!("C_l must be positive, got {c_l}")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("solver tolerance must be positive"));
    }

    let mut smo = Smo {
        q,
        y: labels.iter().map(|l| l.sign()).collect(),
        c: c_l,
        beta: vec![0.0; n],
        grad: vec![-1.0; n],
    };
    let mut trace = Vec::new();
    if opts.record_trace {
        trace.push(0.0);
    }

    let mut iterations = 0;
    loop {
        match smo.select(opts.tol) {
            Some((i, j)) if iterations < opts.max_iter => {
                smo.step(i, j);
                iterations += 1;
                if opts.record_trace {
                    trace.push(smo.objective_from_gradient());
                }
            }
            Some(_) => {
                smo.refresh_gradient();
                return Err(Error::NotConverged {
                    iterations,
                    kkt_violation: smo.violation(),
                    best: smo.beta,
                });
            }
            None => {
                // guard against drift in the incrementally updated gradient
                smo.refresh_gradient();
                if smo.violation() <= opts.tol || iterations >= opts.max_iter {
                    break;
                }
            }
        }
    }

    let kkt_violation = smo.violation();
    if kkt_violation > opts.tol {
        return Err(Error::NotConverged {
            iterations,
            kkt_violation,
            best: smo.beta,
        });
    }
    let objective = dual_objective(q, &smo.beta);
    Ok(DualSolution {
        beta: smo.beta,
        objective,
        kkt_violation,
        iterations,
        trace,
    })
}
