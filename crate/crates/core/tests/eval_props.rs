mod common;

use common::{all_label_vectors, brute_auc, brute_chi2, brute_prf};
use proptest::prelude::*;
use rand::Rng;
use s3vmr::eval::{
    auc, chi2_rank, cross_validate, cross_validate_detailed, generate_synthetic, prf, rank_unlabeled,
    stratified_folds, sweep, Dataset, FeatureSpace, SweepParam,
};
use s3vmr::model::{train, Label};
use s3vmr::text::FeatureVectorF1;
use s3vmr::{Error, Hyperparameters};

fn label_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<Label>> {
    prop::collection::vec(any::<bool>(), min..max)
        .prop_map(|v| v.into_iter().map(|b| if b { Label::Pos } else { Label::Neg }).collect::<Vec<_>>())
        .prop_filter("both classes", |v| v.iter().any(|l| l.is_pos()) && v.iter().any(|l| !l.is_pos()))
}

#[test]
fn metrics_match_brute_force_exhaustively() {
    let mut rng = common::rng(3);
    for n in 2..=8 {
        for truths in all_label_vectors(n) {
            // coarse scores force plenty of ties
            let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..4) as f64 * 0.5).collect();
            assert!((auc(&scores, &truths).unwrap() - brute_auc(&scores, &truths)).abs() <= 1e-12);

            let preds: Vec<Label> = scores.iter().map(|s| Label::from_sign(s - 0.75)).collect();
            let p = prf(&preds, &truths).unwrap();
            let got = [p.accuracy, p.precision_pos, p.precision_neg, p.recall_pos, p.recall_neg, p.f1_pos, p.f1_neg];
            for (g, e) in got.iter().zip(brute_prf(&preds, &truths)) {
                assert!((g - e).abs() <= 1e-12);
            }

            let feature: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            let rows: Vec<FeatureVectorF1> = feature.iter().map(|&f| FeatureVectorF1::from_flags([f; 12])).collect();
            let report = chi2_rank(&rows, &truths, 0.5).unwrap();
            assert!((report.scores[0] - brute_chi2(&feature, &truths)).abs() <= 1e-12);
        }
    }
}

#[test]
fn spec_style_reference_values() {
    use Label::{Neg, Pos};
    assert_eq!(auc(&[0.9, 0.4, 0.6, 0.1], &[Pos, Neg, Pos, Neg]).unwrap(), 1.0);
    assert_eq!(auc(&[0.3; 4], &[Pos, Neg, Pos, Neg]).unwrap(), 0.5);
    assert!(auc(&[0.1, 0.2], &[Pos, Pos]).is_err());

    // 3 TP, 1 FP, 2 FN, 4 TN
    let preds = [Pos, Pos, Pos, Pos, Neg, Neg, Neg, Neg, Neg, Neg];
    let truth = [Pos, Pos, Pos, Neg, Pos, Pos, Neg, Neg, Neg, Neg];
    let p = prf(&preds, &truth).unwrap();
    assert!((p.precision_pos - 0.75).abs() < 1e-12);
    assert!((p.recall_pos - 0.6).abs() < 1e-12);
    assert!((p.f1_pos - 2.0 / 3.0).abs() < 1e-12);
    assert!(prf(&preds[..3], &truth).is_err());

    let aligned: Vec<FeatureVectorF1> = truth.iter().map(|t| FeatureVectorF1::from_flags([t.is_pos(); 12])).collect();
    let balanced = [Pos, Pos, Pos, Pos, Pos, Neg, Neg, Neg, Neg, Neg];
    let aligned_balanced: Vec<FeatureVectorF1> =
        balanced.iter().map(|t| FeatureVectorF1::from_flags([t.is_pos(); 12])).collect();
    assert!((chi2_rank(&aligned_balanced, &balanced, 0.5).unwrap().scores[0] - 10.0).abs() < 1e-12);
    let constant = vec![FeatureVectorF1::from_flags([true; 12]); 10];
    let r = chi2_rank(&constant, &truth, 0.5).unwrap();
    assert_eq!(r.scores[0], 0.0);
    assert!(!r.selected[0]);
    assert!(chi2_rank(&aligned, &truth, 0.5).unwrap().selected[0]);
}

proptest! {
    #[test]
    fn auc_invariant_under_monotone_maps(
        truths in label_strategy(2, 20),
        seed in any::<u64>(),
        a in 0.1..10.0f64,
        b in -5.0..5.0f64,
    ) {
        let mut rng = common::rng(seed);
        let scores: Vec<f64> = truths.iter().map(|_| rng.gen_range(-2.0..2.0)).collect();
        let base = auc(&scores, &truths).unwrap();
        let affine: Vec<f64> = scores.iter().map(|s| a * s + b).collect();
        let exp: Vec<f64> = scores.iter().map(|s| s.exp()).collect();
        prop_assert_eq!(auc(&affine, &truths).unwrap(), base);
        prop_assert_eq!(auc(&exp, &truths).unwrap(), base);
    }

    #[test]
    fn prf_accuracy_and_f1_conventions(truths in label_strategy(2, 30), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let preds: Vec<Label> = truths.iter().map(|_| if rng.gen_bool(0.5) { Label::Pos } else { Label::Neg }).collect();
        let p = prf(&preds, &truths).unwrap();
        let correct = preds.iter().zip(&truths).filter(|(a, b)| a == b).count();
        prop_assert_eq!(p.accuracy, correct as f64 / truths.len() as f64);
        if p.precision_pos == 0.0 && p.recall_pos == 0.0 {
            prop_assert_eq!(p.f1_pos, 0.0);
        }
        if p.precision_neg == 0.0 && p.recall_neg == 0.0 {
            prop_assert_eq!(p.f1_neg, 0.0);
        }
        for v in [p.accuracy, p.precision_pos, p.precision_neg, p.recall_pos, p.recall_neg, p.f1_pos, p.f1_neg] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn chi2_symmetric_in_label_sign(truths in label_strategy(2, 30), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let rows: Vec<FeatureVectorF1> = truths.iter().map(|_| common::random_f1(&mut rng)).collect();
        let flipped: Vec<Label> = truths.iter().map(|l| Label::from_sign(-l.sign())).collect();
        let a = chi2_rank(&rows, &truths, 0.5).unwrap();
        let b = chi2_rank(&rows, &flipped, 0.5).unwrap();
        prop_assert_eq!(a.scores, b.scores);
        for s in a.scores {
            prop_assert!(s >= 0.0);
        }
    }

    #[test]
    fn stratified_folds_partition_labels(truths in label_strategy(4, 40), k in 2usize..6, seed in any::<u64>()) {
        prop_assume!(k <= truths.len());
        let folds = stratified_folds(&truths, k, seed).unwrap();
        let mut seen: Vec<usize> = folds.iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..truths.len()).collect::<Vec<_>>());
        let sizes: Vec<usize> = folds.iter().map(|f| f.len()).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        let pos_counts: Vec<usize> = folds.iter().map(|f| f.iter().filter(|&&i| truths[i].is_pos()).count()).collect();
        prop_assert!(pos_counts.iter().max().unwrap() - pos_counts.iter().min().unwrap() <= 1);
    }
}

fn small_dataset(seed: u64) -> Dataset {
    generate_synthetic(12, 40, 0.1, seed).unwrap().dataset(FeatureSpace::F1).unwrap()
}

#[test]
fn leave_one_out_holds_each_sample_out_once() {
    let ds = small_dataset(4);
    let l = ds.n_labeled();
    let out = cross_validate_detailed(&ds, &Hyperparameters::default(), l, 0).unwrap();
    let mut held: Vec<usize> = out.folds.iter().flat_map(|f| f.held_out.clone()).collect();
    held.sort_unstable();
    assert_eq!(held, (0..l).collect::<Vec<_>>());
    assert!(out.folds.iter().all(|f| f.auc.is_none()));
    assert!((0.0..=1.0).contains(&out.mean.auc));
}

#[test]
fn degenerate_fold_is_reported() {
    let mut ds = small_dataset(5);
    let l = ds.n_labeled();
    for (i, y) in ds.labels.iter_mut().enumerate() {
        *y = if i == 0 { Label::Pos } else { Label::Neg };
    }
    let err = cross_validate(&ds, &Hyperparameters::default(), l, 0).unwrap_err();
    assert!(matches!(err, Error::DegenerateFold { .. }));
    assert!(err.to_string().contains("degenerate fold"));
}

#[test]
fn cross_validation_is_deterministic() {
    let ds = small_dataset(6);
    let h = Hyperparameters::default();
    assert_eq!(cross_validate(&ds, &h, 4, 7).unwrap(), cross_validate(&ds, &h, 4, 7).unwrap());
}

#[test]
fn single_value_sweep_equals_cross_validation() {
    let ds = small_dataset(7);
    let h = Hyperparameters::default();
    let rows = sweep(&ds, &h, SweepParam::Cs, &[0.2], 4, 3).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].1, cross_validate(&ds, &h, 4, 3).unwrap());
    let err = sweep(&ds, &h, SweepParam::Cl, &[0.6, 0.0], 4, 3).unwrap_err();
    assert!(err.to_string().contains("C_l must be positive"));
    let grid = sweep(&ds, &h, SweepParam::Cr, &[0.0, 0.0002, 0.0006, 0.2, 1.0], 4, 3).unwrap();
    assert_eq!(grid.len(), 5);
}

#[test]
fn noise_free_synthetic_data_is_perfectly_ranked() {
    let s = generate_synthetic(40, 100, 0.0, 11).unwrap();
    let ds = s.dataset(FeatureSpace::F1).unwrap();
    let h = Hyperparameters::new(10.0, 0.2, 0.2).unwrap();
    let report = cross_validate(&ds, &h, 10, 1).unwrap();
    assert!((report.auc - 1.0).abs() <= 1e-9, "auc {}", report.auc);
}

#[test]
fn noise_free_indicators_are_separable() {
    let s = generate_synthetic(10, 200, 0.0, 2).unwrap();
    let ds = s.dataset(FeatureSpace::F1).unwrap();
    // every positive carries an indicator no negative ever fires
    let neg_union: u32 = ds
        .ids
        .iter()
        .zip(&ds.f1)
        .filter(|(id, _)| !s.truth_of(id).unwrap().is_pos())
        .fold(0, |acc, (_, v)| acc | v.bits().iter().enumerate().fold(0, |m, (k, b)| m | (u32::from(*b) << k)));
    for (id, v) in ds.ids.iter().zip(&ds.f1) {
        if s.truth_of(id).unwrap().is_pos() {
            let mask = v.bits().iter().enumerate().fold(0u32, |m, (k, b)| m | (u32::from(*b) << k));
            assert_ne!(mask & !neg_union, 0, "{id}");
        }
    }
}

#[test]
fn ranking_puts_planted_positives_on_top() {
    let s = generate_synthetic(20, 200, 0.05, 8).unwrap();
    let ds = s.dataset(FeatureSpace::F1).unwrap();
    let model = train(&ds.samples(), &ds.labels, &Hyperparameters::default(), &ds.f1, &ds.f2).unwrap();
    let ranked = rank_unlabeled(&model, &ds).unwrap();
    assert_eq!(ranked.len(), ds.n_unlabeled());
    for w in ranked.windows(2) {
        assert!(w[0].score >= w[1].score);
    }
    let top = &ranked[..20];
    let hits = top.iter().filter(|r| s.truth_of(&r.id).unwrap().is_pos()).count();
    assert_eq!(hits, 20);

    let mut shifted = model.clone();
    shifted.bias += 3.5;
    let again = rank_unlabeled(&shifted, &ds).unwrap();
    let ids = |v: &[s3vmr::eval::RankedItem]| v.iter().map(|r| r.id.clone()).collect::<Vec<_>>();
    assert_eq!(ids(&again), ids(&ranked));
}

#[test]
fn null_model_keeps_pool_order() {
    let ds = small_dataset(9);
    let mut model = train(&ds.samples(), &ds.labels, &Hyperparameters::default(), &ds.f1, &ds.f2).unwrap();
    model.alpha.iter_mut().for_each(|a| *a = 0.0);
    model.bias = 0.0;
    let ranked = rank_unlabeled(&model, &ds).unwrap();
    assert!(ranked.iter().all(|r| r.score == 0.0 && !r.label.is_pos()));
    let ids: Vec<&str> = ranked.iter().map(|r| r.id.as_str()).collect();
    let pool: Vec<&str> = ds.ids[ds.n_labeled()..].iter().map(|s| s.as_str()).collect();
    assert_eq!(ids, pool);
}
