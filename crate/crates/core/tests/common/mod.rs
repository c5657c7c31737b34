//! Helpers shared by the integration tests: independent oracles, random
//! instance builders and the bundled UCI loader.
#![allow(dead_code)]

pub mod grad;
pub mod oracles;
pub mod criteria;

use std::path::PathBuf;

use catgain::codec::{
    decode, encode_dataset, fuzzify_multiclass, fuzzify_multilabel, Cell, FeatureSchema, FeatureSpec, FuzzyDataset,
    RawRecord,
};
use catgain::gain::{sample_hints, sample_seeds, Batch, GainModel, GainParams};
use catgain::io::{binarize_labels, read_schema, read_table_file};
use catgain::linalg::Matrix;
use catgain::rng::{Seed, Stream};
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// The bundled breast-cancer table, fuzzy-coded with `seed`, plus 0/1 labels.
pub fn uci(seed: Seed) -> (FuzzyDataset, Vec<f64>) {
    let schema = read_schema(&data_dir().join("breast-cancer.schema")).expect("schema");
    let table = read_table_file(&data_dir().join("breast-cancer.csv"), &schema, Some("recurrence")).expect("table");
    let (labels, _) = binarize_labels(table.labels.as_ref().expect("label column"), None).expect("labels");
    let data = encode_dataset(&table.records, &schema, &mut seed.stream("fuzzify")).expect("encode");
    (data, labels)
}

/// AUROC as the share of (positive, negative) pairs ranked correctly, ties
/// counting one half. Quadratic, used only as an oracle.
pub fn auroc_pairs(scores: &[f64], labels: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (i, &yi) in labels.iter().enumerate() {
        if yi != 1.0 {
            continue;
        }
        for (j, &yj) in labels.iter().enumerate() {
            if yj != 0.0 {
                continue;
            }
            den += 1.0;
            num += if scores[i] > scores[j] {
                1.0
            } else if scores[i] == scores[j] {
                0.5
            } else {
                0.0
            };
        }
    }
    num / den
}

/// Central finite difference of `f` in every coordinate of `theta`.
pub fn numeric_gradient(theta: &[f64], h: f64, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut t = theta.to_vec();
    (0..theta.len())
        .map(|i| {
            t[i] = theta[i] + h;
            let up = f(&t);
            t[i] = theta[i] - h;
            let down = f(&t);
            t[i] = theta[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Largest relative error between two gradients. Entries smaller than
/// `floor` in both are compared on the absolute scale `floor`.
pub fn max_rel_error(analytic: &[f64], numeric: &[f64], floor: f64) -> f64 {
    assert_eq!(analytic.len(), numeric.len());
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| (a - n).abs() / a.abs().max(n.abs()).max(floor))
        .fold(0.0, f64::max)
}

/// A random mixed schema with `p` features.
pub fn random_schema(rng: &mut Stream, p: usize) -> FeatureSchema {
    let specs = (0..p)
        .map(|j| match rng.gen_range(0..5) {
            0 | 1 => FeatureSpec::multiclass(format!("f{j}"), rng.gen_range(2..5)),
            2 | 3 => FeatureSpec::multilabel(format!("f{j}"), rng.gen_range(1..4)),
            _ => FeatureSpec::numeric(format!("f{j}")),
        })
        .collect();
    FeatureSchema::new(specs).unwrap()
}

/// A random record over `schema`, each cell missing with probability `missing`.
pub fn random_record(rng: &mut Stream, schema: &FeatureSchema, missing: f64) -> RawRecord {
    RawRecord::new(
        schema
            .features()
            .iter()
            .map(|spec| {
                if rng.gen_bool(missing) {
                    return Cell::Missing;
                }
                match spec.kind {
                    catgain::codec::FeatureKind::Multiclass => Cell::Class(rng.gen_range(0..spec.cardinality)),
                    catgain::codec::FeatureKind::Multilabel => {
                        Cell::labels((0..spec.cardinality).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>())
                    }
                    catgain::codec::FeatureKind::Numeric => Cell::Numeric(rng.gen_range(0.0..=1.0)),
                }
            })
            .collect(),
    )
}

/// Smallest distance of any relu pre-activation from its kink at 0.
pub fn relu_margin(net: &catgain::nn::Mlp, input: &Matrix) -> f64 {
    let mut x = input.clone();
    let mut margin = f64::INFINITY;
    for layer in net.layers() {
        let (pre, out) = layer.forward(&x);
        if layer.activation == catgain::nn::Activation::Relu {
            margin = pre.as_slice().iter().fold(margin, |m, v| m.min(v.abs()));
        }
        x = out;
    }
    margin
}

/// A small random model and a batch drawn for it. Draws are repeated until
/// every relu pre-activation sits at least `1e-3` from the kink, where a
/// finite difference would straddle two linear pieces.
pub fn random_instance(seed: u64) -> (GainModel, Batch) {
    for attempt in 0.. {
        let (model, batch) = draw_instance(Seed(seed).substream("instance", &[attempt]));
        let g_in = catgain::gain::generator_input(&batch.values, &batch.mask, &batch.seeds);
        let (_, g) = model.generate(&batch.values, &batch.mask, &batch.seeds).unwrap();
        let margin = relu_margin(&model.generator, &g_in).min(relu_margin(&model.discriminator, &g.hstack(&batch.hints)));
        if margin > 1e-3 {
            return (model, batch);
        }
    }
    unreachable!()
}

fn draw_instance(mut rng: Stream) -> (GainModel, Batch) {
    let p = rng.gen_range(2..5);
    let schema = random_schema(&mut rng, p);
    let rows = rng.gen_range(3..6);
    let records: Vec<RawRecord> = (0..rows).map(|_| random_record(&mut rng, &schema, 0.4)).collect();
    let data = encode_dataset(&records, &schema, &mut rng).unwrap();
    let params = GainParams {
        generator_hidden: Some([6, 5, 4]),
        discriminator_hidden: Some([6, 5]),
        hint_rate: 0.5,
        lambda_sim: rng.gen_range(0.5..2.0),
        ..GainParams::default()
    };
    let mut model = GainModel::new(schema.clone(), params, &mut rng).unwrap();
    // random biases keep relu pre-activations away from the kink at exactly 0
    jitter_biases(&mut model.generator, &mut rng);
    jitter_biases(&mut model.discriminator, &mut rng);
    let q = schema.width();
    let mut seeds = Matrix::zeros(rows, q);
    let mut hints = Matrix::zeros(rows, q);
    for r in 0..rows {
        seeds.row_mut(r).copy_from_slice(&sample_seeds(q, 0.0, 1.0, &mut rng));
        hints.row_mut(r).copy_from_slice(&sample_hints(data.mask().row(r), &schema, 0.5, &mut rng));
    }
    let batch = Batch {
        values: data.values().clone(),
        mask: data.mask().clone(),
        mu: data.mu().clone(),
        seeds,
        hints,
    };
    (model, batch)
}

pub fn jitter_biases(net: &mut catgain::nn::Mlp, rng: &mut Stream) {
    for layer in net.layers_mut() {
        for b in &mut layer.bias {
            *b = rng.gen_range(-0.1..0.1);
        }
    }
}

/// Decode failures over `draws` fuzzifications of every one-hot pattern for
/// `q` in 2..=6 and every multi-hot pattern for `q` in 1..=4.
pub fn retention_failures(draws: usize) -> usize {
    let mut rng = Seed(11).stream("retention");
    let mut failures = 0;
    for q in 2..=6 {
        let spec = FeatureSpec::multiclass("x", q);
        for active in 0..q {
            let mut z = vec![0.0; q];
            z[active] = 1.0;
            for _ in 0..draws {
                let x = fuzzify_multiclass(&z, &mut rng).unwrap();
                if decode(&x, &spec) != Cell::Class(active) {
                    failures += 1;
                }
            }
        }
    }
    for q in 1..=4usize {
        let spec = FeatureSpec::multilabel("x", q);
        for pattern in 0..(1u32 << q) {
            let on: Vec<usize> = (0..q).filter(|k| pattern >> k & 1 == 1).collect();
            let z: Vec<f64> = (0..q).map(|k| f64::from(pattern >> k & 1)).collect();
            for _ in 0..draws {
                let x = fuzzify_multilabel(&z, &mut rng).unwrap();
                if decode(&x, &spec) != Cell::Labels(on.clone()) {
                    failures += 1;
                }
            }
        }
    }
    failures
}

