mod common;

use catgain::eval::{
    accuracy, auroc, kfold_split, mask_dataset, run_benchmark, BenchmarkConfig, EvalError, LogisticRegression,
    MaskingPlan, Method,
};
use catgain::linalg::{norm, Matrix};
use catgain::rng::Seed;
use common::criteria::{complete_data_scores, flat_dataset, leakage_audits, masking_fraction};
use common::{auroc_pairs, uci};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn auroc_worked_example_and_edges() {
    let (s, y) = ([0.1, 0.4, 0.35, 0.8], [0.0, 0.0, 1.0, 1.0]);
    assert_eq!(auroc(&s, &y).unwrap(), 0.75);
    assert_eq!(auroc_pairs(&s, &y), 0.75);
    assert_eq!(auroc(&[0.1, 0.2, 0.9], &[0.0, 0.0, 1.0]).unwrap(), 1.0);
    assert_eq!(auroc(&[0.3; 5], &[0.0, 1.0, 0.0, 1.0, 1.0]).unwrap(), 0.5);
    assert!(matches!(auroc(&[0.1, 0.2], &[1.0, 1.0]), Err(EvalError::SingleClass)));
}

proptest! {
    #[test]
    fn auroc_equals_pairwise_oracle(pairs in prop::collection::vec((0u8..6, any::<bool>()), 2..60)) {
        let scores: Vec<f64> = pairs.iter().map(|(s, _)| f64::from(*s) / 5.0).collect();
        let labels: Vec<f64> = pairs.iter().map(|(_, y)| f64::from(u8::from(*y))).collect();
        prop_assume!(labels.contains(&0.0) && labels.contains(&1.0));
        prop_assert!((auroc(&scores, &labels).unwrap() - auroc_pairs(&scores, &labels)).abs() < 1e-12);
    }
}

#[test]
fn logistic_fit_satisfies_first_order_condition() {
    let mut rng = Seed(4).stream("logreg");
    let x = Matrix::from_vec(120, 6, (0..720).map(|_| rng.gen_range(-1.0..1.0)).collect());
    let y: Vec<f64> = x.row_iter().map(|r| f64::from(u8::from(r[0] - r[2] + rng.gen_range(-0.5..0.5) > 0.0))).collect();
    for lambda in [1e-3, 1.0, 10.0] {
        let m = LogisticRegression::fit(&x, &y, lambda).unwrap();
        let g = m.objective_gradient(&x, &y, lambda);
        assert!(norm(&g) < 1e-6, "lambda {lambda}: {}", norm(&g));
    }
}

#[test]
fn logistic_trivial_fits() {
    let x = Matrix::from_vec(20, 1, (0..20).map(|i| i as f64 / 10.0 - 1.0).collect());
    let ones = vec![1.0; 20];
    let m = LogisticRegression::fit(&x, &ones, 1e-3).unwrap();
    assert!(m.predict_proba(&x).iter().all(|&p| p > 0.9));
    let sep: Vec<f64> = x.column(0).iter().map(|&v| f64::from(u8::from(v > 0.0))).collect();
    let m = LogisticRegression::fit(&x, &sep, 1e-4).unwrap();
    assert_eq!(accuracy(&m.predict_proba(&x), &sep).unwrap(), 1.0);
}

#[test]
fn masking_extremes_and_concentration() {
    let d = flat_dataset(20);
    let (none, cells) = mask_dataset(&d, &MaskingPlan { proportion: 0.0, seed: Seed(1) });
    assert!(cells.is_empty());
    assert_eq!(none, d);
    let (all, _) = mask_dataset(&d, &MaskingPlan { proportion: 1.0, seed: Seed(1) });
    assert!(all.mu().as_slice().iter().all(|&m| m == 0.0));
    for s in 0..5 {
        let f = masking_fraction(Seed(s));
        assert!((f - 0.3).abs() <= 0.015, "seed {s}: {f}");
    }
}

#[test]
fn folds_partition_rows() {
    let f = kfold_split(10, 5, Seed(0)).unwrap();
    assert!(f.iter().all(|v| v.len() == 2));
    let mut all: Vec<usize> = f.concat();
    all.sort_unstable();
    assert_eq!(all, (0..10).collect::<Vec<_>>());
    assert_eq!(f, kfold_split(10, 5, Seed(0)).unwrap());
    assert_ne!(f, kfold_split(10, 5, Seed(1)).unwrap());
    assert!(kfold_split(3, 5, Seed(0)).is_err());
}

#[test]
fn complete_data_reproduces_reference_scores() {
    let (acc, au, mp) = complete_data_scores(Seed(0));
    println!("accuracy {acc:.3}, auroc {au:.3}, most-popular auroc {mp}");
    assert!((acc - 0.737).abs() <= 0.06);
    assert!((au - 0.721).abs() <= 0.06);
    assert_eq!(mp, 0.5);
}

#[test]
fn zero_masking_no_imputation_matches_complete_and_runs_repeat() {
    let (data, labels) = uci(Seed(0));
    let config = BenchmarkConfig {
        proportions: vec![0.0],
        methods: vec![Method::Complete, Method::NoImputation, Method::Random],
        seed: Seed(3),
        ..BenchmarkConfig::default()
    };
    let a = run_benchmark(&data, &labels, &config).unwrap();
    for metric in ["accuracy", "auroc"] {
        assert_eq!(
            a.row(0.0, "complete", metric).unwrap().fold_values,
            a.row(0.0, "no-imputation", metric).unwrap().fold_values
        );
    }
    assert_eq!(a, run_benchmark(&data, &labels, &config).unwrap());
}

#[test]
fn no_method_sees_the_test_fold() {
    for audit in leakage_audits() {
        assert!(audit.parameters > 0 || audit.method == Method::MostPopular || audit.method == Method::Random, "{audit:?}");
        assert!(audit.identical, "{audit:?}");
    }
}
