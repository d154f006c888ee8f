use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Hyperparameters, Label, Problem};
use crate::text::{build_similarity_matrix, extract_f1, fit_ngram_model, AdRecord, FeatureVectorF1};

/// Which representation the kernel sees. The agreement Laplacian always
/// uses the indicators and the heat graph always uses similarity rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSpace {
    /// The 12 binary indicators.
    #[default]
    F1,
    /// Rows of the TF-IDF similarity matrix.
    F2,
    /// Indicators followed by the similarity row.
    Both,
}

impl std::str::FromStr for FeatureSpace {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "f1" => Ok(FeatureSpace::F1),
            "f2" => Ok(FeatureSpace::F2),
            "both" | "f1f2" => Ok(FeatureSpace::Both),
            other => Err(format!("unknown feature space {other:?} (expected f1, f2 or both)")),
        }
    }
}

/// A transductive pool: labeled samples first, then unlabeled ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub ids: Vec<String>,
    pub f1: Vec<FeatureVectorF1>,
    pub f2: Vec<Vec<f64>>,
    /// Labels of the first `labels.len()` samples.
    pub labels: Vec<Label>,
    pub space: FeatureSpace,
}

impl Dataset {
    /// Builds features for `corpus` and moves labeled ads to the front. Both
    /// groups keep their corpus order.
    pub fn from_corpus(corpus: &[AdRecord], labeled: &[(String, Label)], space: FeatureSpace) -> Result<Self> {
        Self::build(corpus, labeled, None, space)
    }

    /// Like [`Dataset::from_corpus`] but with precomputed indicator vectors.
    pub fn from_corpus_with_f1(
        corpus: &[AdRecord],
        labeled: &[(String, Label)],
        f1: &BTreeMap<String, FeatureVectorF1>,
        space: FeatureSpace,
    ) -> Result<Self> {
        Self::build(corpus, labeled, Some(f1), space)
    }

    fn build(
        corpus: &[AdRecord],
        labeled: &[(String, Label)],
        f1_override: Option<&BTreeMap<String, FeatureVectorF1>>,
        space: FeatureSpace,
    ) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::invalid("corpus is empty"));
        }
        let label_of: HashMap<&str, Label> = labeled.iter().map(|(id, l)| (id.as_str(), *l)).collect();
        let position: HashMap<&str, usize> = corpus.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();
        if position.len() != corpus.len() {
            return Err(Error::invalid("corpus ids are not unique"));
        }
        for (id, _) in labeled {
            if !position.contains_key(id.as_str()) {
                return Err(Error::invalid(format!("unknown id in labels: {id:?}")));
            }
        }

        let (lab, unlab): (Vec<&AdRecord>, Vec<&AdRecord>) =
            corpus.iter().partition(|a| label_of.contains_key(a.id.as_str()));
        let ordered: Vec<AdRecord> = lab.iter().chain(&unlab).map(|a| (*a).clone()).collect();
        let labels = lab.iter().map(|a| label_of[a.id.as_str()]).collect();
        let ids: Vec<String> = ordered.iter().map(|a| a.id.clone()).collect();

        let f1 = match f1_override {
            Some(map) => ids
                .iter()
                .map(|id| {
                    map.get(id)
                        .copied()
                        .ok_or_else(|| Error::invalid(format!("no feature row for id {id:?}")))
                })
                .collect::<Result<Vec<_>>>()?,
            None => {
                let ngrams = fit_ngram_model(&ordered)?;
                ordered.iter().map(|a| extract_f1(a, &ngrams)).collect()
            }
        };
        let f2 = build_similarity_matrix(&ordered).rows();
        Ok(Dataset {
            ids,
            f1,
            f2,
            labels,
            space,
        })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn n_labeled(&self) -> usize {
        self.labels.len()
    }

    pub fn n_unlabeled(&self) -> usize {
        self.n() - self.n_labeled()
    }

    pub fn sample(&self, i: usize) -> Vec<f64> {
        match self.space {
            FeatureSpace::F1 => self.f1[i].to_f64(),
            FeatureSpace::F2 => self.f2[i].clone(),
            FeatureSpace::Both => {
                let mut v = self.f1[i].to_f64();
                v.extend_from_slice(&self.f2[i]);
                v
            }
        }
    }

    /// Kernel inputs for every sample.
    pub fn samples(&self) -> Vec<Vec<f64>> {
        (0..self.n()).map(|i| self.sample(i)).collect()
    }

    pub fn problem(&self, hyper: &Hyperparameters) -> Result<Problem> {
        Problem::assemble(&self.samples(), &self.f1, &self.f2, hyper)
    }

    /// Same pool with a different kernel input space.
    pub fn with_space(&self, space: FeatureSpace) -> Self {
        Dataset {
            space,
            ..self.clone()
        }
    }
}
