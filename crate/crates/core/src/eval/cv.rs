use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::metrics::{auc, prf, MetricsReport, Prf};
use super::Dataset;
use crate::error::{Error, Result};
use crate::model::{fit, Hyperparameters, Label, Problem, SolverOptions};

/// Assigns each labeled index to one of `folds` groups, class by class, after
/// a seeded shuffle. Fold sizes differ by at most one.
pub fn stratified_folds(labels: &[Label], folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 {
        return Err(Error::invalid("folds must be at least 2"));
    }
    if folds > labels.len() {
        return Err(Error::invalid(format!(
            "{folds} folds requested but only {} labeled samples",
            labels.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i].is_pos()).collect();
    let mut neg: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i].is_pos()).collect();
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut out = vec![Vec::new(); folds];
    for (k, i) in pos.into_iter().chain(neg).enumerate() {
        out[k % folds].push(i);
    }
    for f in &mut out {
        f.sort_unstable();
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    /// Labeled indices held out in this fold.
    pub held_out: Vec<usize>,
    /// Transductive decision values of the held-out samples.
    pub scores: Vec<f64>,
    pub truths: Vec<Label>,
    /// `None` when the held-out set has a single class.
    pub auc: Option<f64>,
    pub prf: Prf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    pub folds: Vec<FoldResult>,
    pub mean: MetricsReport,
}

fn run_fold(
    problem: &Problem,
    dataset: &Dataset,
    held_out: &[usize],
    fold: usize,
    hyper: &Hyperparameters,
) -> Result<FoldResult> {
    let l = dataset.n_labeled();
    let mut is_held = vec![false; l];
    for &i in held_out {
        is_held[i] = true;
    }
    let train_idx: Vec<usize> = (0..l).filter(|&i| !is_held[i]).collect();
    let train_labels: Vec<Label> = train_idx.iter().map(|&i| dataset.labels[i]).collect();
    let pos = train_labels.iter().filter(|y| y.is_pos()).count();
    if pos == 0 || pos == train_labels.len() {
        return Err(Error::DegenerateFold { fold });
    }

    // training labels first, then the held-out samples (now unlabeled), then the pool
    let order: Vec<usize> = train_idx
        .iter()
        .copied()
        .chain(held_out.iter().copied())
        .chain(l..dataset.n())
        .collect();
    let fitted = fit(&problem.permuted(&order), &train_labels, hyper, &SolverOptions::default())?;

    let offset = train_idx.len();
    let scores: Vec<f64> = fitted.transductive[offset..offset + held_out.len()].to_vec();
    let truths: Vec<Label> = held_out.iter().map(|&i| dataset.labels[i]).collect();
    let predictions: Vec<Label> = scores.iter().map(|&s| Label::from_sign(s)).collect();
    let auc = auc(&scores, &truths).ok();
    let prf = prf(&predictions, &truths)?;
    Ok(FoldResult {
        held_out: held_out.to_vec(),
        scores,
        truths,
        auc,
        prf,
    })
}

/// Transductive k-fold cross-validation over the labeled samples. Each fold's
/// held-out labels are hidden and those samples join the unlabeled pool.
pub fn cross_validate_detailed(dataset: &Dataset, hyper: &Hyperparameters, folds: usize, seed: u64) -> Result<CvOutcome> {
    hyper.validate()?;
    let groups = stratified_folds(&dataset.labels, folds, seed)?;
    let problem = dataset.problem(hyper)?;
    let results: Vec<FoldResult> = groups
        .par_iter()
        .enumerate()
        .map(|(k, held)| run_fold(&problem, dataset, held, k, hyper))
        .collect::<Result<_>>()?;
    let mean = average(&results)?;
    Ok(CvOutcome { folds: results, mean })
}

pub fn cross_validate(dataset: &Dataset, hyper: &Hyperparameters, folds: usize, seed: u64) -> Result<MetricsReport> {
    cross_validate_detailed(dataset, hyper, folds, seed).map(|o| o.mean)
}

/// Fold means. AUC averages the folds whose held-out set has both classes;
/// if none does, it falls back to the AUC of all held-out scores pooled.
fn average(results: &[FoldResult]) -> Result<MetricsReport> {
    let k = results.len() as f64;
    let aucs: Vec<f64> = results.iter().filter_map(|r| r.auc).collect();
    let auc_mean = if aucs.is_empty() {
        let scores: Vec<f64> = results.iter().flat_map(|r| r.scores.iter().copied()).collect();
        let truths: Vec<Label> = results.iter().flat_map(|r| r.truths.iter().copied()).collect();
        auc(&scores, &truths)?
    } else {
        aucs.iter().sum::<f64>() / aucs.len() as f64
    };
    let mean = |f: fn(&Prf) -> f64| results.iter().map(|r| f(&r.prf)).sum::<f64>() / k;
    Ok(MetricsReport {
        auc: auc_mean,
        accuracy: mean(|p| p.accuracy),
        precision_pos: mean(|p| p.precision_pos),
        precision_neg: mean(|p| p.precision_neg),
        recall_pos: mean(|p| p.recall_pos),
        recall_neg: mean(|p| p.recall_neg),
        f1_pos: mean(|p| p.f1_pos),
        f1_neg: mean(|p| p.f1_neg),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Cl,
    Cr,
    Cs,
}

impl std::str::FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "cl" | "c_l" => Ok(SweepParam::Cl),
            "cr" | "c_r" => Ok(SweepParam::Cr),
            "cs" | "c_s" => Ok(SweepParam::Cs),
            other => Err(format!("unknown sweep parameter {other:?} (expected cl, cr or cs)")),
        }
    }
}

/// Cross-validates once per value of `param`, other settings fixed.
pub fn sweep(
    dataset: &Dataset,
    base: &Hyperparameters,
    param: SweepParam,
    values: &[f64],
    folds: usize,
    seed: u64,
) -> Result<Vec<(f64, MetricsReport)>> {
    if values.is_empty() {
        return Err(Error::invalid("sweep needs at least one value"));
    }
    let hypers: Vec<Hyperparameters> = values
        .iter()
        .map(|&v| {
            let mut h = *base;
            match param {
                SweepParam::Cl => {
                    if !(v > 0.0) {
                        return Err(Error::invalid("C_l must be positive"));
                    }
                    h.c_l = v;
                }
                SweepParam::Cr => h.c_r = v,
                SweepParam::Cs => h.c_s = v,
            }
            h.validate()?;
            Ok(h)
        })
        .collect::<Result<_>>()?;
    hypers
        .iter()
        .zip(values)
        .map(|(h, &v)| cross_validate(dataset, h, folds, seed).map(|r| (v, r)))
        .collect()
}
