use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Label;

/// Rank-based AUC (Mann-Whitney U) with midranks for tied scores.
pub fn auc(scores: &[f64], truths: &[Label]) -> Result<f64> {
    if scores.len() != truths.len() {
        return Err(Error::DimensionMismatch {
            expected: truths.len(),
            got: scores.len(),
        });
    }
    let n_pos = truths.iter().filter(|t| t.is_pos()).count();
    let n_neg = truths.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::invalid("AUC needs both classes"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap_or(Ordering::Equal));

    let mut rank_sum_pos = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // ranks are 1-based; a tie block [start, end) shares the mean rank
        let mid = (start + end + 1) as f64 / 2.0;
        let pos_in_block = order[start..end].iter().filter(|&&i| truths[i].is_pos()).count();
        rank_sum_pos += mid * pos_in_block as f64;
        start = end;
    }
    let n_pos_f = n_pos as f64;
    let u = rank_sum_pos - n_pos_f * (n_pos_f + 1.0) / 2.0;
    Ok(u / (n_pos_f * n_neg as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    pub fn from_labels(predictions: &[Label], truths: &[Label]) -> Self {
        let mut c = ConfusionCounts::default();
        for (p, t) in predictions.iter().zip(truths) {
            match (p.is_pos(), t.is_pos()) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

/// Per-class precision, recall and F1 plus accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Prf {
    pub accuracy: f64,
    pub precision_pos: f64,
    pub precision_neg: f64,
    pub recall_pos: f64,
    pub recall_neg: f64,
    pub f1_pos: f64,
    pub f1_neg: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1_score(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

impl Prf {
    pub fn from_counts(c: &ConfusionCounts) -> Self {
        let precision_pos = ratio(c.tp, c.tp + c.fp);
        let recall_pos = ratio(c.tp, c.tp + c.fn_);
        let precision_neg = ratio(c.tn, c.tn + c.fn_);
        let recall_neg = ratio(c.tn, c.tn + c.fp);
        Prf {
            accuracy: ratio(c.tp + c.tn, c.total()),
            precision_pos,
            precision_neg,
            recall_pos,
            recall_neg,
            f1_pos: f1_score(precision_pos, recall_pos),
            f1_neg: f1_score(precision_neg, recall_neg),
        }
    }
}

/// Precision, recall and F1 for both classes; empty denominators yield 0.
pub fn prf(predictions: &[Label], truths: &[Label]) -> Result<Prf> {
    if predictions.len() != truths.len() {
        return Err(Error::DimensionMismatch {
            expected: truths.len(),
            got: predictions.len(),
        });
    }
    Ok(Prf::from_counts(&ConfusionCounts::from_labels(predictions, truths)))
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricsReport {
    pub auc: f64,
    pub accuracy: f64,
    pub precision_pos: f64,
    pub precision_neg: f64,
    pub recall_pos: f64,
    pub recall_neg: f64,
    pub f1_pos: f64,
    pub f1_neg: f64,
}

fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

impl MetricsReport {
    pub fn new(auc: f64, prf: &Prf) -> Self {
        MetricsReport {
            auc,
            accuracy: prf.accuracy,
            precision_pos: prf.precision_pos,
            precision_neg: prf.precision_neg,
            recall_pos: prf.recall_pos,
            recall_neg: prf.recall_neg,
            f1_pos: prf.f1_pos,
            f1_neg: prf.f1_neg,
        }
    }

    pub fn values(&self) -> [f64; 8] {
        [
            self.auc,
            self.accuracy,
            self.precision_pos,
            self.precision_neg,
            self.recall_pos,
            self.recall_neg,
            self.f1_pos,
            self.f1_neg,
        ]
    }

    pub const KEYS: [&'static str; 8] = [
        "auc",
        "accuracy",
        "precision_pos",
        "precision_neg",
        "recall_pos",
        "recall_neg",
        "f1_pos",
        "f1_neg",
    ];

    pub fn rounded(&self) -> Self {
        let v = self.values().map(round6);
        MetricsReport {
            auc: v[0],
            accuracy: v[1],
            precision_pos: v[2],
            precision_neg: v[3],
            recall_pos: v[4],
            recall_neg: v[5],
            f1_pos: v[6],
            f1_neg: v[7],
        }
    }

    /// Pretty JSON with values rounded to 6 decimals.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rounded()).expect("plain struct serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Neg, Pos};

    #[test]
    fn auc_examples() {
        assert_eq!(auc(&[0.9, 0.8, 0.1, 0.2], &[Pos, Pos, Neg, Neg]).unwrap(), 1.0);
        assert_eq!(auc(&[0.3; 4], &[Pos, Neg, Pos, Neg]).unwrap(), 0.5);
        assert_eq!(auc(&[0.9, 0.4, 0.6, 0.1], &[Pos, Neg, Pos, Neg]).unwrap(), 1.0);
        assert_eq!(auc(&[0.1, 0.9], &[Pos, Neg]).unwrap(), 0.0);
        assert!(auc(&[0.1, 0.9], &[Pos, Pos]).is_err());
        assert!(auc(&[0.1], &[Pos, Neg]).is_err());
    }

    #[test]
    fn prf_confusion_example() {
        // TP=3, FP=1, FN=2, TN=4
        let mut pred = vec![Pos; 4];
        let mut truth = vec![Pos, Pos, Pos, Neg];
        pred.extend([Neg, Neg, Neg, Neg, Neg, Neg]);
        truth.extend([Pos, Pos, Neg, Neg, Neg, Neg]);
        let r = prf(&pred, &truth).unwrap();
        assert_eq!(r.precision_pos, 0.75);
        assert_eq!(r.recall_pos, 0.6);
        assert!((r.f1_pos - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.accuracy - 0.7).abs() < 1e-12);
    }

    #[test]
    fn prf_all_positive() {
        let r = prf(&[Pos; 4], &[Pos, Pos, Neg, Neg]).unwrap();
        assert_eq!(r.recall_pos, 1.0);
        assert_eq!(r.recall_neg, 0.0);
        assert_eq!(r.precision_neg, 0.0);
        assert_eq!(r.f1_neg, 0.0);
        assert!(prf(&[Pos], &[Pos, Neg]).is_err());
    }

    #[test]
    fn json_has_fixed_keys_and_rounding() {
        let r = MetricsReport {
            auc: 1.0 / 3.0,
            ..Default::default()
        };
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut expected: Vec<String> = MetricsReport::KEYS.iter().map(|s| s.to_string()).collect();
        expected.sort();
        let mut keys_sorted = keys.clone();
        keys_sorted.sort();
        assert_eq!(keys_sorted, expected);
        assert_eq!(v["auc"].as_f64().unwrap(), 0.333333);
    }
}
