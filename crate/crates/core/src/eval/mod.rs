//! Evaluation harness: datasets, transductive cross-validation, metrics,
//! chi-squared feature ranking, sweeps, ranked export and synthetic data.

mod chi2;
mod cv;
mod dataset;
mod metrics;
mod rank;
mod synth;

pub use chi2::{chi2_2x2, chi2_rank, Chi2Report, DEFAULT_CHI2_THRESHOLD};
pub use cv::{cross_validate, cross_validate_detailed, stratified_folds, sweep, CvOutcome, FoldResult, SweepParam};
pub use dataset::{Dataset, FeatureSpace};
pub use metrics::{auc, prf, ConfusionCounts, MetricsReport, Prf};
pub use rank::{control_groups, rank_unlabeled, ranking_csv, RankedItem};
pub use synth::{generate_synthetic, SyntheticCorpus};
