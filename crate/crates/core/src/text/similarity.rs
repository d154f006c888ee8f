use super::tfidf::fit_transform;
use super::{tokenize, AdRecord};

/// Dense symmetric cosine similarities between unigram TF-IDF vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Builds the similarity space over stop-word-filtered unigrams. A document
/// with no content tokens gets an all-zero row and column.
pub fn build_similarity_matrix(corpus: &[AdRecord]) -> SimilarityMatrix {
    let n = corpus.len();
    let docs: Vec<Vec<String>> = corpus
        .iter()
        .map(|ad| tokenize(&ad.text(), true).tokens)
        .collect();
    let tfidf = fit_transform(&docs);

    let mut postings: Vec<Vec<(usize, f64)>> = vec![Vec::new(); tfidf.vocabulary.len()];
    for (doc, row) in tfidf.rows.iter().enumerate() {
        for &(col, v) in row {
            postings[col].push((doc, v));
        }
    }

    let mut entries = vec![0.0; n * n];
    let mut acc = vec![0.0; n];
    for (i, row) in tfidf.rows.iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        acc.iter_mut().for_each(|a| *a = 0.0);
        for &(col, vi) in row {
            for &(j, vj) in &postings[col] {
                if j > i {
                    acc[j] += vi * vj;
                }
            }
        }
        entries[i * n + i] = 1.0;
        for j in i + 1..n {
            let s = acc[j].clamp(0.0, 1.0);
            entries[i * n + j] = s;
            entries[j * n + i] = s;
        }
    }
    SimilarityMatrix { n, entries }
}
