use crate::error::{Error, Result};
use crate::model::Label;
use crate::text::{Feature, FeatureVectorF1};

pub const DEFAULT_CHI2_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Chi2Report {
    pub scores: [f64; Feature::COUNT],
    pub selected: [bool; Feature::COUNT],
    pub threshold: f64,
}

/// Pearson chi-squared of the 2x2 table `[[a, b], [c, d]]`, one degree of
/// freedom, no continuity correction. Zero when any margin is empty.
pub fn chi2_2x2(a: usize, b: usize, c: usize, d: usize) -> f64 {
    let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
    let n = a + b + c + d;
    let den = (a + b) * (c + d) * (a + c) * (b + d);
    if den == 0.0 {
        return 0.0;
    }
    let diff = a * d - b * c;
    n * diff * diff / den
}

/// Scores every indicator against the labels; `selected` marks scores
/// strictly above `threshold`.
pub fn chi2_rank(f1_matrix: &[FeatureVectorF1], labels: &[Label], threshold: f64) -> Result<Chi2Report> {
    if f1_matrix.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            got: f1_matrix.len(),
        });
    }
    let mut scores = [0.0; Feature::COUNT];
    for f in Feature::ALL {
        // rows: feature on/off, columns: positive/negative
        let (mut a, mut b, mut c, mut d) = (0, 0, 0, 0);
        for (v, y) in f1_matrix.iter().zip(labels) {
            match (v.get(f) == 1, y.is_pos()) {
                (true, true) => a += 1,
                (true, false) => b += 1,
                (false, true) => c += 1,
                (false, false) => d += 1,
            }
        }
        scores[f.index()] = chi2_2x2(a, b, c, d);
    }
    let selected = scores.map(|s| s > threshold);
    Ok(Chi2Report {
        scores,
        selected,
        threshold,
    })
}

impl Chi2Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("feature,score,selected\n");
        for f in Feature::ALL {
            out.push_str(&format!(
                "{},{},{}\n",
                f.name(),
                crate::io::fmt_sig(self.scores[f.index()], 9),
                self.selected[f.index()]
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Neg, Pos};

    #[test]
    fn perfect_feature_on_ten_balanced() {
        assert_eq!(chi2_2x2(5, 0, 0, 5), 10.0);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            let mut v = FeatureVectorF1::default();
            v.set(Feature::SpaRef, i < 5);
            v.set(Feature::WebsiteRef, true);
            rows.push(v);
            labels.push(if i < 5 { Pos } else { Neg });
        }
        let r = chi2_rank(&rows, &labels, DEFAULT_CHI2_THRESHOLD).unwrap();
        assert_eq!(r.scores[Feature::SpaRef.index()], 10.0);
        assert!(r.selected[Feature::SpaRef.index()]);
        assert_eq!(r.scores[Feature::WebsiteRef.index()], 0.0);
        assert!(!r.selected[Feature::WebsiteRef.index()]);
        assert_eq!(r.to_csv().lines().count(), 13);
    }

    #[test]
    fn length_mismatch() {
        assert!(chi2_rank(&[FeatureVectorF1::default()], &[], 0.5).is_err());
    }
}
