//! Measurements shared by the topical suites and the acceptance run.

use catgain::codec::{encode_dataset, Cell, FeatureSchema, FeatureSpec, FuzzyDataset, RawRecord};
use catgain::eval::{audit_leakage, mask_dataset, run_benchmark, BenchmarkConfig, LeakageAudit, MaskingPlan, Method};
use catgain::gain::TrainConfig;
use catgain::baselines::AutoencoderConfig;
use catgain::rng::Seed;

use super::uci;

/// Complete-data accuracy, complete-data AUROC and most-popular AUROC on the
/// bundled table under 5-fold CV.
pub fn complete_data_scores(seed: Seed) -> (f64, f64, f64) {
    let (data, labels) = uci(seed);
    let config = BenchmarkConfig {
        proportions: vec![0.0],
        methods: vec![Method::Complete, Method::MostPopular],
        seed,
        ..BenchmarkConfig::default()
    };
    let report = run_benchmark(&data, &labels, &config).expect("benchmark");
    (
        report.mean(0.0, "complete", "accuracy").expect("accuracy"),
        report.mean(0.0, "complete", "auroc").expect("auroc"),
        report.mean(0.0, "most-popular", "auroc").expect("auroc"),
    )
}

/// `rows × 10` single-category table.
pub fn flat_dataset(rows: usize) -> FuzzyDataset {
    let schema = FeatureSchema::new((0..10).map(|j| FeatureSpec::multiclass(format!("f{j}"), 2)).collect()).unwrap();
    let recs: Vec<RawRecord> = (0..rows).map(|i| RawRecord::new(vec![Cell::Class(i % 2); 10])).collect();
    encode_dataset(&recs, &schema, &mut Seed(0).stream("flat")).unwrap()
}

/// Share of 10 000 cells hidden at proportion 0.3.
pub fn masking_fraction(seed: Seed) -> f64 {
    let d = flat_dataset(1000);
    let (masked, cells) = mask_dataset(&d, &MaskingPlan { proportion: 0.3, seed });
    assert_eq!(cells.len(), masked.missing_cells());
    cells.len() as f64 / 10_000.0
}

/// Short schedules: leakage does not depend on how long a model trains.
pub fn audit_config() -> BenchmarkConfig {
    BenchmarkConfig {
        ranks: vec![2, 4],
        draws: 3,
        train: TrainConfig { epochs: 2, ..TrainConfig::default() },
        autoencoder: AutoencoderConfig { epochs: 2, ..AutoencoderConfig::default() },
        seed: Seed(11),
        ..BenchmarkConfig::default()
    }
}

/// One audit per method at proportion 0.3, fold 1.
pub fn leakage_audits() -> Vec<LeakageAudit> {
    let (data, labels) = uci(Seed(0));
    let config = audit_config();
    Method::ALL
        .into_iter()
        .map(|m| audit_leakage(&data, &labels, &config, m, 0.3, 1).expect("audit"))
        .collect()
}

/// Writes a small mixed table with missing cells into `dir` and returns a
/// quick run configuration pointing at it.
pub fn tiny_run(dir: &std::path::Path) -> catgain::io::RunConfig {
    let schema = "colour multiclass 3 red,green,blue\ntags multilabel 2 a,b\nsize multiclass 2 s,l\n";
    let mut csv = String::from("colour,tags,size,y\n");
    for i in 0..40 {
        let colour = ["red", "green", "blue", ""][i % 4];
        let tags = ["a", "b", "a|b", "|", ""][i % 5];
        let size = if i % 7 == 3 { "" } else { ["s", "l"][(i / 2) % 2] };
        csv.push_str(&format!("{colour},{tags},{size},{}\n", ["no", "yes"][(i / 3) % 2]));
    }
    std::fs::write(dir.join("t.schema"), schema).unwrap();
    std::fs::write(dir.join("t.csv"), csv).unwrap();
    catgain::io::RunConfig {
        schema: Some(dir.join("t.schema")),
        data: Some(dir.join("t.csv")),
        label: Some("y".into()),
        output: dir.join("out"),
        epochs: 3,
        k: 3,
        ae_epochs: 3,
        ranks: vec![2],
        methods: vec![Method::Average, Method::Svd, Method::Gain],
        proportions: vec![0.2],
        ..catgain::io::RunConfig::default()
    }
}

/// Runs `command` on the tiny table, replays its manifest into a second
/// directory and reports whether every output digest matched.
pub fn replay_is_identical(command: catgain::io::Command) -> bool {
    let dir = tempfile::tempdir().unwrap();
    let config = tiny_run(dir.path());
    catgain::io::run_command(command, &config).expect("run");
    let manifest = config.output.join(catgain::io::MANIFEST_FILE);
    let report = catgain::io::replay(&manifest, &dir.path().join("again")).expect("replay");
    report.identical()
}

/// Mean losses at epoch 5 and at the last epoch of one training run.
#[derive(Clone, Copy, Debug)]
pub struct LossEnds {
    pub early_d: f64,
    pub late_d: f64,
    pub early_g: f64,
    pub late_g: f64,
}

/// Trains hard-binary and fuzzy GAIN on the 1 000 × 15 dependent corpus of
/// `seed` (20% of cells hidden) and returns both loss summaries.
pub fn coding_losses(seed: Seed, epochs: usize) -> (LossEnds, LossEnds) {
    use catgain::codec::Coding;
    use catgain::gain::{train, GainError, GainModel, GainParams};
    use catgain::synthetic::dependent_corpus;

    let (schema, records) = dependent_corpus(1000, 15, 0.1, seed);
    let full = encode_dataset(&records, &schema, &mut seed.stream("fuzzify")).unwrap();
    let (data, _) = mask_dataset(&full, &MaskingPlan { proportion: 0.2, seed });
    let run = |coding: Coding| {
        let params = GainParams { coding, ..GainParams::default() };
        let mut model = GainModel::new(schema.clone(), params, &mut seed.stream("init")).unwrap();
        let config = TrainConfig { epochs, seed, ..TrainConfig::default() };
        let trace = match train(&mut model, &data, &config) {
            Ok(t) => t,
            Err(GainError::Divergence { trace, .. }) => trace,
            Err(e) => panic!("{e}"),
        };
        let at = |e: usize| trace.epochs[e.min(trace.len() - 1)];
        let (early, late) = (at(4), at(epochs - 1));
        LossEnds { early_d: early.loss_d, late_d: late.loss_d, early_g: early.loss_g, late_g: late.loss_g }
    };
    (run(Coding::HardBinary), run(Coding::Fuzzy))
}

/// Entries where the generator output differs from the observed value, or
/// from the raw network output at a missing slot, over random models.
pub fn pass_through_violations(trials: u64) -> usize {
    use catgain::gain::{sample_seeds, GainModel, GainParams};
    use catgain::linalg::Matrix;

    let mut rng = Seed(9).stream("pass-through");
    let mut bad = 0;
    for trial in 0..trials {
        let schema = super::random_schema(&mut rng, 2 + (trial % 5) as usize);
        let recs: Vec<RawRecord> = (0..6).map(|_| super::random_record(&mut rng, &schema, 0.4)).collect();
        let d = encode_dataset(&recs, &schema, &mut rng).unwrap();
        let model = GainModel::new(schema.clone(), GainParams::default(), &mut Seed(trial).stream("init")).unwrap();
        let q = schema.width();
        let seeds = Matrix::from_vec(6, q, sample_seeds(6 * q, 0.0, 1.0, &mut rng));
        let (raw, g) = model.generate(d.values(), d.mask(), &seeds).unwrap();
        for (k, &mk) in d.mask().as_slice().iter().enumerate() {
            let want = if mk == 1.0 { d.values().as_slice()[k] } else { raw.as_slice()[k] };
            bad += usize::from(g.as_slice()[k] != want);
        }
    }
    bad
}

/// Hint draws on a 10-feature schema where the number of neutral blocks is
/// not exactly one, or an exposed block differs from the mask.
pub fn hint_violations(rounds: usize) -> usize {
    use catgain::codec::build_masks;
    use catgain::gain::sample_hints;
    use rand::Rng;

    let schema = FeatureSchema::new((0..10).map(|j| FeatureSpec::multiclass(format!("f{j}"), 2 + j % 4)).collect()).unwrap();
    let mut rng = Seed(6).stream("hint-suite");
    (0..rounds)
        .filter(|_| {
            let mu: Vec<f64> = (0..10).map(|_| f64::from(u8::from(rng.gen_bool(0.6)))).collect();
            let m = build_masks(&mu, &schema);
            let h = sample_hints(&m, &schema, 0.1, &mut rng);
            let neutral = (0..10).filter(|&j| h[schema.block(j)].iter().all(|&v| v == 0.5)).count();
            let exposed = (0..10).filter(|&j| h[schema.block(j)] == m[schema.block(j)]).count();
            neutral != 1 || exposed != 9
        })
        .count()
}

/// Random score vectors where the rank-sum AUROC and the pairwise oracle
/// disagree beyond 1e-12.
pub fn auroc_disagreements(cases: u64) -> usize {
    use rand::Rng;

    let mut rng = Seed(21).stream("auroc-suite");
    (0..cases)
        .filter(|_| {
            let n = rng.gen_range(4..80);
            let scores: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0u8..8)) / 7.0).collect();
            let mut labels: Vec<f64> = (0..n).map(|_| f64::from(u8::from(rng.gen_bool(0.4)))).collect();
            labels[0] = 0.0;
            labels[1] = 1.0;
            let got = catgain::eval::auroc(&scores, &labels).unwrap();
            (got - super::auroc_pairs(&scores, &labels)).abs() > 1e-12
        })
        .count()
}

/// GAIN, no-imputation and average AUROC at 30% and 50% masking.
#[derive(Clone, Copy, Debug)]
pub struct MaskedAuroc {
    pub gain_30: f64,
    pub none_30: f64,
    pub gain_50: f64,
    pub average_50: f64,
}

/// Default-configured benchmark on the bundled table for one master seed.
pub fn masked_auroc(seed: Seed) -> MaskedAuroc {
    let (data, labels) = uci(seed);
    let config = BenchmarkConfig {
        proportions: vec![0.3, 0.5],
        methods: vec![Method::NoImputation, Method::Average, Method::Gain],
        seed,
        ..BenchmarkConfig::default()
    };
    let r = run_benchmark(&data, &labels, &config).expect("benchmark");
    let get = |p: f64, m: &str| r.mean(p, m, "auroc").expect("auroc");
    MaskedAuroc {
        gain_30: get(0.3, "gain"),
        none_30: get(0.3, "no-imputation"),
        gain_50: get(0.5, "gain"),
        average_50: get(0.5, "average"),
    }
}
