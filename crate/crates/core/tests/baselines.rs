mod common;

use catgain::baselines::{avg_impute, no_impute, svd, AutoencoderConfig, AutoencoderImputer, SvdImputer};
use catgain::codec::{encode_dataset, Cell, FeatureSchema, FeatureSpec, RawRecord};
use catgain::linalg::Matrix;
use catgain::rng::Seed;
use common::oracles::{eckart_young_error, idempotence_error, random_matrix, svd_suite};
use rand::Rng;

#[test]
fn truncation_residual_matches_eigen_oracle() {
    for s in 0..20 {
        let a = random_matrix(5, 4, Seed(s));
        let err = eckart_young_error(&a);
        assert!(err < 1e-8, "seed {s}: {err:e}");
    }
    let tall = random_matrix(3, 7, Seed(99));
    assert!(eckart_young_error(&tall) < 1e-8);
}

#[test]
fn singular_values_match_eigen_oracle() {
    let a = random_matrix(5, 4, Seed(42));
    let na = nalgebra::DMatrix::from_row_slice(5, 4, a.as_slice());
    let want = na.singular_values();
    let got = svd(&a).unwrap().s;
    let mut want: Vec<f64> = want.iter().copied().collect();
    want.sort_by(|x, y| y.total_cmp(x));
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-10);
    }
}

#[test]
fn projector_is_idempotent() {
    let (_, worst) = svd_suite(20);
    assert!(worst < 1e-10, "{worst:e}");
    // a row already in the row space passes through unchanged
    let a = random_matrix(6, 5, Seed(1));
    let imp = SvdImputer::fit_matrix(&a, vec![0.0; 5], 3).unwrap();
    let inside = Matrix::from_rows(&[vec![0.7, -0.2, 0.1]]).matmul(imp.factor());
    assert!(inside.matmul(&imp.projector()).max_abs_diff(&inside) < 1e-10);
    assert!(idempotence_error(&a, 5) < 1e-10);
}

#[test]
fn rank_one_outer_product_is_recovered() {
    let u = [1.0, -2.0, 0.5, 3.0];
    let v = [0.3, 0.0, -1.0];
    let a = Matrix::from_rows(&u.iter().map(|x| v.iter().map(|y| x * y).collect::<Vec<_>>()).collect::<Vec<_>>());
    assert!(svd(&a).unwrap().reconstruct(1).max_abs_diff(&a) < 1e-12);
}

/// Rows drawn from four fixed category patterns over six features.
fn pattern_corpus(n: usize, seed: Seed) -> Vec<RawRecord> {
    let patterns = [[0, 1, 2, 0, 1, 2], [1, 0, 1, 2, 0, 0], [2, 2, 0, 1, 1, 1], [0, 0, 0, 0, 2, 2]];
    let mut rng = seed.stream("patterns");
    (0..n)
        .map(|_| RawRecord::new(patterns[rng.gen_range(0..4)].iter().map(|&c| Cell::Class(c)).collect()))
        .collect()
}

fn pattern_schema() -> FeatureSchema {
    FeatureSchema::new((0..6).map(|j| FeatureSpec::multiclass(format!("f{j}"), 3)).collect()).unwrap()
}

/// Hides one random feature in every row.
fn hide_one(records: &[RawRecord], seed: Seed) -> Vec<RawRecord> {
    let mut rng = seed.stream("hide");
    records
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.cells[rng.gen_range(0..6)] = Cell::Missing;
            r
        })
        .collect()
}

#[test]
fn full_rank_svd_imputer_reproduces_complete_test_rows() {
    let schema = pattern_schema();
    let d = encode_dataset(&pattern_corpus(60, Seed(0)), &schema, &mut Seed(1).stream("f")).unwrap();
    let imp = SvdImputer::fit(&d, 18).unwrap();
    let test = encode_dataset(&pattern_corpus(10, Seed(2)), &schema, &mut Seed(3).stream("f")).unwrap();
    assert!(imp.impute_test(&test).unwrap().max_abs_diff(test.binary()) < 1e-8);
}

#[test]
fn autoencoder_recovers_low_rank_patterns_on_held_out_rows() {
    let schema = pattern_schema();
    let full_train = pattern_corpus(400, Seed(10));
    let full_test = pattern_corpus(100, Seed(11));
    let train = encode_dataset(&hide_one(&full_train, Seed(12)), &schema, &mut Seed(13).stream("f")).unwrap();
    let test = encode_dataset(&hide_one(&full_test, Seed(14)), &schema, &mut Seed(15).stream("f")).unwrap();
    let truth = encode_dataset(&full_test, &schema, &mut Seed(15).stream("f")).unwrap();
    let config = AutoencoderConfig { epochs: 300, seed: Seed(16), ..AutoencoderConfig::default() };
    let ae = AutoencoderImputer::fit(&train, 8, &config).unwrap();
    let out = ae.impute(&test).unwrap();
    let (mut err, mut count) = (0.0, 0);
    for ((o, t), m) in out.as_slice().iter().zip(truth.binary().as_slice()).zip(test.mask().as_slice()) {
        if *m == 0.0 {
            err += (o - t).abs();
            count += 1;
        }
    }
    let mae = err / count as f64;
    println!("held-out mean absolute error {mae:.4}");
    assert!(mae < 0.05, "{mae}");
}

#[test]
fn untrained_autoencoder_is_deterministic() {
    let schema = pattern_schema();
    let d = encode_dataset(&hide_one(&pattern_corpus(30, Seed(0)), Seed(1)), &schema, &mut Seed(2).stream("f")).unwrap();
    let config = AutoencoderConfig { epochs: 0, seed: Seed(5), ..AutoencoderConfig::default() };
    let a = AutoencoderImputer::fit(&d, 4, &config).unwrap().impute(&d).unwrap();
    let b = AutoencoderImputer::fit(&d, 4, &config).unwrap().impute(&d).unwrap();
    assert_eq!(a, b);
}

#[test]
fn mean_fill_and_no_imputation() {
    let schema = FeatureSchema::new(vec![FeatureSpec::numeric("x"), FeatureSpec::multiclass("c", 2)]).unwrap();
    let recs = vec![
        RawRecord::new(vec![Cell::Numeric(0.2), Cell::Class(0)]),
        RawRecord::new(vec![Cell::Numeric(0.8), Cell::Class(1)]),
        RawRecord::new(vec![Cell::Missing, Cell::Class(1)]),
    ];
    let d = encode_dataset(&recs, &schema, &mut Seed(0).stream("f")).unwrap();
    let out = avg_impute(&d, &d).unwrap();
    assert!((out[(2, 0)] - 0.5).abs() < 1e-15);
    assert_eq!(&out.as_slice()[..2], &d.binary().as_slice()[..2]);
    let zeros = no_impute(&d);
    assert_eq!(zeros[(2, 0)], 0.0);
    assert_eq!(no_impute(&d), zeros);
}
