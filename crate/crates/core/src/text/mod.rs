//! Text side of the pipeline: ad records, tokenization, the binary indicator
//! space and the TF-IDF similarity space.

mod features;
mod ngram;
mod similarity;
pub mod stopwords;
mod tfidf;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use features::{extract_f1, parse_weight_lbs, Feature, FeatureVectorF1, ENTROPY_THRESHOLD, LOW_WEIGHT_LBS};
pub use ngram::{fit_ngram_model, NgramModel, NGRAM_ORDER};
pub use similarity::{build_similarity_matrix, SimilarityMatrix};
pub use stopwords::is_stop_word;

/// One classified ad.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdRecord {
    pub id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub body: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub age: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

impl AdRecord {
    pub fn new(id: impl Into<String>, title: impl Into<String>, body: impl Into<String>) -> Self {
        AdRecord {
            id: id.into(),
            title: title.into(),
            body: body.into(),
            age: None,
            location: None,
        }
    }

    /// Title and body joined by a single space; every extractor reads this.
    pub fn text(&self) -> String {
        match (self.title.is_empty(), self.body.is_empty()) {
            (true, _) => self.body.clone(),
            (false, true) => self.title.clone(),
            (false, false) => format!("{} {}", self.title, self.body),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    pub stopword_filtered: bool,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }

    /// True if `phrase` occurs as a contiguous run of tokens.
    pub fn contains_phrase(&self, phrase: &[&str]) -> bool {
        if phrase.is_empty() || phrase.len() > self.tokens.len() {
            return false;
        }
        self.tokens
            .windows(phrase.len())
            .any(|w| w.iter().zip(phrase).all(|(a, b)| a == b))
    }
}

/// Lowercases, treats every non-alphanumeric character as a separator and
/// splits. Stop words are dropped when `remove_stopwords` is set.
pub fn tokenize(text: &str, remove_stopwords: bool) -> TokenStream {
    let lowered = text.to_lowercase();
    let tokens = lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .filter(|t| !remove_stopwords || !is_stop_word(t))
        .map(str::to_owned)
        .collect();
    TokenStream {
        tokens,
        stopword_filtered: remove_stopwords,
    }
}

/// Shannon entropy in bits of the empirical token distribution.
pub fn entropy(stream: &TokenStream) -> f64 {
    let n = stream.len();
    if n == 0 {
        return 0.0;
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in stream.iter() {
        *counts.entry(t).or_default() += 1;
    }
    let n = n as f64;
    let h: f64 = counts
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum();
    // a single distinct token gives -1*log2(1) = -0.0
    h.max(0.0)
}

/// Splits a corpus into ads with at least one active indicator and ads with
/// none. Order is preserved within each side.
pub fn filter_corpus(corpus: &[AdRecord], ngrams: &NgramModel) -> (Vec<AdRecord>, Vec<AdRecord>) {
    corpus
        .iter()
        .cloned()
        .partition(|ad| !extract_f1(ad, ngrams).is_zero())
}
