use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::tfidf::fit_transform;
use super::{tokenize, AdRecord, TokenStream};
use crate::error::{Error, Result};

pub const NGRAM_ORDER: usize = 4;
const TOP_K: usize = 3;

/// Word 4-gram TF-IDF vocabulary and the columns holding the globally
/// largest matrix elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NgramModel {
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<f64>,
    /// Up to three distinct columns, in ranking order. Fewer than three only
    /// when the corpus has fewer distinct 4-grams.
    pub top3_columns: Vec<usize>,
    /// The 4-grams behind `top3_columns`, space-joined.
    pub top3_ngrams: Vec<String>,
}

pub(crate) fn ngrams(stream: &TokenStream) -> Vec<String> {
    stream
        .tokens
        .windows(NGRAM_ORDER)
        .map(|w| w.join(" "))
        .collect()
}

pub fn fit_ngram_model(corpus: &[AdRecord]) -> Result<NgramModel> {
    if corpus.is_empty() {
        return Err(Error::invalid("corpus is empty"));
    }
    let docs: Vec<Vec<String>> = corpus
        .iter()
        .map(|ad| ngrams(&tokenize(&ad.text(), false)))
        .collect();
    let tfidf = fit_transform(&docs);
    if tfidf.vocabulary.is_empty() {
        return Err(Error::NoNgrams);
    }

    // (value, column, row); descending value, then smaller column, then smaller row
    let mut elements: Vec<(f64, usize, usize)> = tfidf
        .rows
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (v, c, r)))
        .filter(|&(v, _, _)| v > 0.0)
        .collect();
    elements.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut top3_columns = Vec::with_capacity(TOP_K);
    for &(_, col, _) in &elements {
        if !top3_columns.contains(&col) {
            top3_columns.push(col);
            if top3_columns.len() == TOP_K {
                break;
            }
        }
    }

    let by_column: BTreeMap<usize, &String> = tfidf.vocabulary.iter().map(|(k, &v)| (v, k)).collect();
    let top3_ngrams = top3_columns.iter().map(|c| by_column[c].clone()).collect();

    Ok(NgramModel {
        vocabulary: tfidf.vocabulary,
        idf: tfidf.idf,
        top3_columns,
        top3_ngrams,
    })
}

impl NgramModel {
    /// Flags for the selected columns: 1 iff the ad's TF-IDF weight in that
    /// column is positive, i.e. the ad contains the 4-gram.
    pub fn flags(&self, stream: &TokenStream) -> [u8; TOP_K] {
        let grams = ngrams(stream);
        let mut out = [0u8; TOP_K];
        for (k, gram) in self.top3_ngrams.iter().enumerate() {
            out[k] = u8::from(grams.iter().any(|g| g == gram));
        }
        out
    }
}
