use std::cmp::Ordering;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Dataset;
use crate::error::{Error, Result};
use crate::io::fmt_sig;
use crate::model::{decision, Label, TrainedModel};

#[derive(Debug, Clone, PartialEq)]
pub struct RankedItem {
    pub id: String,
    pub score: f64,
    pub label: Label,
}

/// Scores every unlabeled sample and sorts by decision value, highest first.
/// Ties keep dataset order.
pub fn rank_unlabeled(model: &TrainedModel, dataset: &Dataset) -> Result<Vec<RankedItem>> {
    let mut items = (dataset.n_labeled()..dataset.n())
        .map(|i| {
            let score = decision(model, &dataset.sample(i))?;
            Ok(RankedItem {
                id: dataset.ids[i].clone(),
                score,
                label: Label::from_sign(score),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    items.sort_by(|a, b| b.score.partial_cmp(&a.score).unwrap_or(Ordering::Equal));
    Ok(items)
}

/// CSV `id,score,label`, in ranking order.
pub fn ranking_csv(items: &[RankedItem]) -> String {
    let mut out = String::from("id,score,label\n");
    for it in items {
        let label = if it.label.is_pos() { "1" } else { "-1" };
        out.push_str(&format!("{},{},{}\n", it.id, fmt_sig(it.score, 17), label));
    }
    out
}

/// Seeded samples of `n` ids from the predicted-positive and
/// predicted-negative sets, each listed in ranking order.
pub fn control_groups(items: &[RankedItem], n: usize, seed: u64) -> Result<(Vec<String>, Vec<String>)> {
    let pos: Vec<&RankedItem> = items.iter().filter(|i| i.label.is_pos()).collect();
    let neg: Vec<&RankedItem> = items.iter().filter(|i| !i.label.is_pos()).collect();
    for (name, set) in [("predicted-positive", &pos), ("predicted-negative", &neg)] {
        if n > set.len() {
            return Err(Error::invalid(format!(
                "control sample of {n} exceeds the {name} set ({} items)",
                set.len()
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |set: &[&RankedItem]| {
        let mut idx = sample(&mut rng, set.len(), n).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| set[i].id.clone()).collect::<Vec<_>>()
    };
    let p = draw(&pos);
    let q = draw(&neg);
    Ok((p, q))
}
