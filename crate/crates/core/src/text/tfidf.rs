//! Sparse TF-IDF with raw term counts, smoothed idf
//! `ln((1 + n) / (1 + df)) + 1` and L2-normalized rows.

use std::collections::{BTreeMap, BTreeSet};

/// Row entries sorted by column.
pub(crate) type SparseRow = Vec<(usize, f64)>;

#[derive(Debug, Clone)]
pub(crate) struct TfIdf {
    /// Term to column; columns follow lexicographic term order.
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<f64>,
    pub rows: Vec<SparseRow>,
}

pub(crate) fn smoothed_idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

pub(crate) fn fit_transform(docs: &[Vec<String>]) -> TfIdf {
    let terms: BTreeSet<&str> = docs.iter().flatten().map(String::as_str).collect();
    let vocabulary: BTreeMap<String, usize> = terms
        .into_iter()
        .enumerate()
        .map(|(i, t)| (t.to_owned(), i))
        .collect();

    let counts: Vec<BTreeMap<usize, usize>> = docs
        .iter()
        .map(|doc| {
            let mut c = BTreeMap::new();
            for term in doc {
                *c.entry(vocabulary[term]).or_default() += 1;
            }
            c
        })
        .collect();

    let mut df = vec![0usize; vocabulary.len()];
    for c in &counts {
        for &col in c.keys() {
            df[col] += 1;
        }
    }
    let idf: Vec<f64> = df.iter().map(|&d| smoothed_idf(docs.len(), d)).collect();

    let rows = counts
        .iter()
        .map(|c| {
            let mut row: SparseRow = c.iter().map(|(&col, &n)| (col, n as f64 * idf[col])).collect();
            let norm = row.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                for (_, v) in &mut row {
                    *v /= norm;
                }
            }
            row
        })
        .collect();

    TfIdf {
        vocabulary,
        idf,
        rows,
    }
}
