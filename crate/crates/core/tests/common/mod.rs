//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use s3vmr::model::Label;
use s3vmr::text::FeatureVectorF1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random labels with both classes present.
pub fn random_labels(rng: &mut ChaCha8Rng, l: usize) -> Vec<Label> {
    assert!(l >= 2);
    let mut labels: Vec<Label> = (0..l).map(|_| if rng.gen_bool(0.5) { Label::Pos } else { Label::Neg }).collect();
    labels[0] = Label::Pos;
    labels[1] = Label::Neg;
    labels
}

pub fn random_f1(rng: &mut ChaCha8Rng) -> FeatureVectorF1 {
    let mut bits = [0u8; 12];
    for b in &mut bits {
        *b = u8::from(rng.gen_bool(0.4));
    }
    FeatureVectorF1::from_bits(bits).unwrap()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.gen_range(-scale..scale)).collect()).collect()
}

/// Samples, indicator vectors and similarity-like rows for `l + u` points.
pub struct Instance {
    pub samples: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
    pub f1: Vec<FeatureVectorF1>,
    pub f2: Vec<Vec<f64>>,
}

pub fn random_instance(rng: &mut ChaCha8Rng, l: usize, u: usize, dim: usize) -> Instance {
    let n = l + u;
    Instance {
        samples: random_points(rng, n, dim, 1.0),
        labels: random_labels(rng, l),
        f1: (0..n).map(|_| random_f1(rng)).collect(),
        f2: (0..n).map(|_| (0..4).map(|_| rng.gen_range(0.0..1.0)).collect()).collect(),
    }
}

pub fn signs(labels: &[Label]) -> Vec<f64> {
    labels.iter().map(|l| l.sign()).collect()
}

/// `-1/2 b'Qb + sum(b)`, written out term by term.
pub fn dual_value(q: &DMatrix<f64>, beta: &[f64]) -> f64 {
    let n = beta.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += beta[i] * q[(i, j)] * beta[j];
        }
    }
    -0.5 * s + beta.iter().sum::<f64>()
}

/// Euclidean projection onto `{0 <= b <= c, y'b = 0}`: the projection is
/// `clip(v - mu y)` for the `mu` solving the monotone equation
/// `sum y_i clip(v_i - mu y_i) = 0`, found by bisection.
pub fn project(v: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let at = |mu: f64| -> Vec<f64> { v.iter().zip(y).map(|(vi, yi)| (vi - mu * yi).clamp(0.0, c)).collect() };
    let h = |mu: f64| -> f64 { at(mu).iter().zip(y).map(|(b, yi)| b * yi).sum() };
    let span = v.iter().map(|x| x.abs()).fold(0.0, f64::max) + c + 1.0;
    let (mut lo, mut hi) = (-span, span);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Accelerated projected gradient with adaptive restart on
/// `min 1/2 b'Qb - sum(b)` over the dual feasible set.
pub fn pg_oracle(q: &DMatrix<f64>, y: &[f64], c: f64, iters: usize) -> Vec<f64> {
    let n = y.len();
    let lipschitz = q.clone().symmetric_eigenvalues().amax().max(1e-12);
    let step = 1.0 / lipschitz;
    let grad = |b: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| (0..n).map(|j| q[(i, j)] * b[j]).sum::<f64>() - 1.0)
            .collect()
    };
    let mut x = project(&vec![0.0; n], y, c);
    let mut z = x.clone();
    let mut t = 1.0f64;
    let mut plain = true;
    for k in 0..iters {
        if k % 50 == 0 {
            // fixed-point residual of the plain projected-gradient map
            let g = grad(&x);
            let cand: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
            let r = project(&cand, y, c).iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if r < 1e-14 {
                break;
            }
        }
        let g = grad(&z);
        let cand: Vec<f64> = z.iter().zip(&g).map(|(zi, gi)| zi - step * gi).collect();
        let x_new = project(&cand, y, c);
        // restart momentum whenever the objective would rise; a plain step
        // from x is always accepted
        if !plain && dual_value(q, &x_new) < dual_value(q, &x) {
            t = 1.0;
            z = x.clone();
            plain = true;
            continue;
        }
        plain = false;
        let t_new = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let w = (t - 1.0) / t_new;
        z = x_new.iter().zip(&x).map(|(a, b)| a + w * (a - b)).collect();
        x = x_new;
        t = t_new;
    }
    x
}

/// Mann-Whitney AUC by direct pair counting, ties worth one half.
pub fn brute_auc(scores: &[f64], truths: &[Label]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, ti) in truths.iter().enumerate() {
        for (j, tj) in truths.iter().enumerate() {
            if ti.is_pos() && !tj.is_pos() {
                den += 1.0;
                if scores[i] > scores[j] {
                    num += 1.0;
                } else if scores[i] == scores[j] {
                    num += 0.5;
                }
            }
        }
    }
    num / den
}

/// `[accuracy, precision+, precision-, recall+, recall-, f1+, f1-]` from the
/// textbook definitions, empty denominators counting as 0.
pub fn brute_prf(pred: &[Label], truth: &[Label]) -> [f64; 7] {
    let count = |p: bool, t: bool| pred.iter().zip(truth).filter(|(a, b)| a.is_pos() == p && b.is_pos() == t).count() as f64;
    let (tp, fp, fneg, tn) = (count(true, true), count(true, false), count(false, true), count(false, false));
    let div = |a: f64, b: f64| if b == 0.0 { 0.0 } else { a / b };
    let f1 = |p: f64, r: f64| if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    let (pp, pn) = (div(tp, tp + fp), div(tn, tn + fneg));
    let (rp, rn) = (div(tp, tp + fneg), div(tn, tn + fp));
    [div(tp + tn, pred.len() as f64), pp, pn, rp, rn, f1(pp, rp), f1(pn, rn)]
}

/// Pearson chi-squared of a 2x2 table via `sum (O - E)^2 / E`, skipping
/// zero-expectation cells.
pub fn brute_chi2(feature: &[bool], truth: &[Label]) -> f64 {
    let n = feature.len() as f64;
    let mut table = [[0.0f64; 2]; 2];
    for (f, t) in feature.iter().zip(truth) {
        table[usize::from(*f)][usize::from(t.is_pos())] += 1.0;
    }
    let mut chi = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            let row: f64 = table[r].iter().sum();
            let col = table[0][c] + table[1][c];
            let e = row * col / n;
            if e > 0.0 {
                chi += (table[r][c] - e).powi(2) / e;
            }
        }
    }
    chi
}

/// Every label vector of length `n` with both classes present.
pub fn all_label_vectors(n: usize) -> Vec<Vec<Label>> {
    (0u32..1 << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { Label::Pos } else { Label::Neg }).collect::<Vec<_>>())
        .filter(|v| v.iter().any(|l| l.is_pos()) && v.iter().any(|l| !l.is_pos()))
        .collect()
}
