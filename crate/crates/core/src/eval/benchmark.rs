use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::folds::complement;
use super::logreg::LogisticRegression;
use super::masking::{mask_dataset, MaskingPlan};
use super::metrics::{accuracy, auroc, most_popular_scores, random_scores};
use super::report::{CellError, EvalReport, ReportMetadata, ReportRow};
use super::{kfold_split, EvalError};
use crate::baselines::{avg_impute, column_means, no_impute, AutoencoderConfig, AutoencoderImputer, SvdImputer};
use crate::codec::{encode_dataset, Cell, FeatureKind, FuzzyDataset, RawRecord};
use crate::gain::{impute, records_to_binary, train, GainModel, GainParams, TrainConfig};
use crate::linalg::Matrix;
use crate::nn::Mlp;
use crate::rng::Seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Downstream model on the unmasked data.
    Complete,
    MostPopular,
    Random,
    NoImputation,
    Average,
    Svd,
    Autoencoder,
    Gain,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Complete,
        Method::MostPopular,
        Method::Random,
        Method::NoImputation,
        Method::Average,
        Method::Svd,
        Method::Autoencoder,
        Method::Gain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Complete => "complete",
            Method::MostPopular => "most-popular",
            Method::Random => "random",
            Method::NoImputation => "no-imputation",
            Method::Average => "average",
            Method::Svd => "svd",
            Method::Autoencoder => "autoencoder",
            Method::Gain => "gain",
        }
    }

    fn tuned(self) -> bool {
        matches!(self, Method::Svd | Method::Autoencoder)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// How the `k` GAIN completions feed the downstream model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    /// One downstream fit per draw, metrics averaged over draws.
    #[default]
    PerDraw,
    /// One downstream fit on the per-cell majority completion.
    Modal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub folds: usize,
    pub proportions: Vec<f64>,
    pub methods: Vec<Method>,
    /// Candidate ranks for the SVD and auto-encoder baselines.
    pub ranks: Vec<usize>,
    pub ridge_lambda: f64,
    /// Multiple-imputation draws per GAIN fit.
    pub draws: usize,
    pub aggregation: Aggregation,
    pub gain: GainParams,
    /// GAIN training schedule; its seed is replaced per fold.
    pub train: TrainConfig,
    /// Auto-encoder schedule; its seed is replaced per fold and rank.
    pub autoencoder: AutoencoderConfig,
    pub seed: Seed,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            folds: 5,
            proportions: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            methods: Method::ALL.to_vec(),
            ranks: vec![4, 8, 16, 32],
            ridge_lambda: 10.0,
            draws: 100,
            aggregation: Aggregation::PerDraw,
            gain: GainParams::default(),
            train: TrainConfig::default(),
            autoencoder: AutoencoderConfig::default(),
            seed: Seed(0),
        }
    }
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        let bad = |m: String| Err(EvalError::InvalidConfig(m));
        if self.methods.is_empty() {
            return bad("method list is empty".into());
        }
        if self.proportions.is_empty() {
            return bad("proportion list is empty".into());
        }
        if let Some(p) = self.proportions.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return bad(format!("proportion {p} outside [0, 1]"));
        }
        if self.folds < 2 {
            return bad("need at least 2 folds".into());
        }
        if self.ranks.is_empty() || self.ranks.contains(&0) {
            return bad("ranks must be a non-empty list of positive integers".into());
        }
        if !(self.ridge_lambda >= 0.0 && self.ridge_lambda.is_finite()) {
            return bad(format!("ridge_lambda {}", self.ridge_lambda));
        }
        if self.draws == 0 {
            return bad("draws must be at least 1".into());
        }
        self.gain.validate().map_err(|e| EvalError::InvalidConfig(e.to_string()))
    }

    /// Masking plan shared by every method at `proportion`.
    pub fn masking_plan(&self, proportion: f64) -> MaskingPlan {
        MaskingPlan {
            proportion,
            seed: self.seed.derive("mask", &[proportion.to_bits()]),
        }
    }

    pub fn fold_seed(&self, method: Method, proportion: f64, fold: usize) -> Seed {
        self.seed
            .derive(method.as_str(), &[proportion.to_bits(), fold as u64])
    }
}

/// Everything one `(proportion, fold, method)` cell sees.
pub struct FoldContext<'a> {
    pub complete: &'a FuzzyDataset,
    pub masked: &'a FuzzyDataset,
    pub labels: &'a [f64],
    pub train: &'a [usize],
    pub test: &'a [usize],
    pub config: &'a BenchmarkConfig,
    pub seed: Seed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoldOutcome {
    pub accuracy: f64,
    pub auroc: f64,
    /// Every parameter fitted in this cell (imputer, then downstream model).
    pub fingerprint: Vec<f64>,
    /// Rank chosen on the inner validation split, for tuned methods.
    pub rank: Option<usize>,
}

fn pick(labels: &[f64], idx: &[usize]) -> Vec<f64> {
    idx.iter().map(|&i| labels[i]).collect()
}

fn mlp_params(m: &Mlp) -> Vec<f64> {
    (0..m.param_count()).map(|i| m.param(i)).collect()
}

struct Scored {
    accuracy: f64,
    auroc: f64,
    params: Vec<f64>,
}

fn downstream(xtr: &Matrix, ytr: &[f64], xte: &Matrix, yte: &[f64], lambda: f64) -> Result<Scored, EvalError> {
    let model = LogisticRegression::fit(xtr, ytr, lambda)?;
    let scores = model.predict_proba(xte);
    Ok(Scored {
        accuracy: accuracy(&scores, yte)?,
        auroc: auroc(&scores, yte)?,
        params: model.parameters(),
    })
}

/// Picks the rank with the best downstream AUROC on an inner validation split
/// of the training fold (ties go to the smaller rank).
fn select_rank<F>(ctx: &FoldContext<'_>, train: &FuzzyDataset, ytr: &[f64], max_rank: usize, mut impute_pair: F) -> Result<usize, EvalError>
where
    F: FnMut(&FuzzyDataset, &FuzzyDataset, usize) -> Result<(Matrix, Matrix), EvalError>,
{
    let mut ranks: Vec<usize> = ctx.config.ranks.iter().copied().filter(|&r| r <= max_rank).collect();
    ranks.sort_unstable();
    ranks.dedup();
    if ranks.is_empty() {
        return Err(EvalError::InvalidConfig(format!("no candidate rank ≤ {max_rank}")));
    }
    if ranks.len() == 1 {
        return Ok(ranks[0]);
    }
    let inner = kfold_split(train.n_rows(), ctx.config.folds, ctx.seed.derive("inner", &[]))?;
    let fit_idx = complement(&inner, 0);
    let (inner_tr, inner_val) = (train.select_rows(&fit_idx), train.select_rows(&inner[0]));
    let (y_fit, y_val) = (pick(ytr, &fit_idx), pick(ytr, &inner[0]));
    let mut best: Option<(usize, f64)> = None;
    let mut last_err = None;
    for r in ranks {
        let scored = impute_pair(&inner_tr, &inner_val, r)
            .and_then(|(a, b)| downstream(&a, &y_fit, &b, &y_val, ctx.config.ridge_lambda));
        match scored {
            Ok(s) if best.is_none_or(|(_, b)| s.auroc > b) => best = Some((r, s.auroc)),
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    match (best, last_err) {
        (Some((r, _)), _) => Ok(r),
        (None, Some(e)) => Err(e),
        (None, None) => unreachable!("at least one rank was tried"),
    }
}

/// Fits and scores one method on one fold of one masked dataset.
pub fn evaluate_fold(ctx: &FoldContext<'_>, method: Method) -> Result<FoldOutcome, EvalError> {
    let lambda = ctx.config.ridge_lambda;
    let ytr = pick(ctx.labels, ctx.train);
    let yte = pick(ctx.labels, ctx.test);
    let trd = ctx.masked.select_rows(ctx.train);
    let ted = ctx.masked.select_rows(ctx.test);
    let q = ctx.masked.schema().width();

    let finish = |imputer: Vec<f64>, s: Scored, rank| {
        let mut fingerprint = imputer;
        fingerprint.extend(s.params);
        Ok(FoldOutcome {
            accuracy: s.accuracy,
            auroc: s.auroc,
            fingerprint,
            rank,
        })
    };
    let constant = |scores: Vec<f64>, fingerprint: Vec<f64>| {
        Ok(FoldOutcome {
            accuracy: accuracy(&scores, &yte)?,
            auroc: auroc(&scores, &yte)?,
            fingerprint,
            rank: None,
        })
    };

    match method {
        Method::Complete => {
            let x = ctx.complete.binary();
            let s = downstream(&x.select_rows(ctx.train), &ytr, &x.select_rows(ctx.test), &yte, lambda)?;
            finish(Vec::new(), s, None)
        }
        Method::MostPopular => {
            let scores = most_popular_scores(&ytr, ctx.test.len());
            let fp = vec![scores.first().copied().unwrap_or(0.0)];
            constant(scores, fp)
        }
        Method::Random => constant(random_scores(ctx.test.len(), ctx.seed), Vec::new()),
        Method::NoImputation => {
            let s = downstream(&no_impute(&trd), &ytr, &no_impute(&ted), &yte, lambda)?;
            finish(Vec::new(), s, None)
        }
        Method::Average => {
            let means = column_means(trd.binary(), trd.mask(), trd.schema());
            let s = downstream(&avg_impute(&trd, &trd)?, &ytr, &avg_impute(&trd, &ted)?, &yte, lambda)?;
            finish(means, s, None)
        }
        Method::Svd => {
            let rank = select_rank(ctx, &trd, &ytr, q.min(trd.n_rows() * (ctx.config.folds - 1) / ctx.config.folds), |a, b, r| {
                let imp = SvdImputer::fit(a, r)?;
                Ok((imp.impute_train(a)?, imp.impute_test(b)?))
            })?;
            let imp = SvdImputer::fit(&trd, rank)?;
            let s = downstream(&imp.impute_train(&trd)?, &ytr, &imp.impute_test(&ted)?, &yte, lambda)?;
            let mut fp = imp.means().to_vec();
            fp.extend_from_slice(imp.factor().as_slice());
            finish(fp, s, Some(rank))
        }
        Method::Autoencoder => {
            let ae_config = |r: usize, tag: &str| AutoencoderConfig {
                seed: ctx.seed.derive(tag, &[r as u64]),
                ..ctx.config.autoencoder.clone()
            };
            let rank = select_rank(ctx, &trd, &ytr, usize::MAX, |a, b, r| {
                let imp = AutoencoderImputer::fit(a, r, &ae_config(r, "ae-inner"))?;
                Ok((imp.impute(a)?, imp.impute(b)?))
            })?;
            let imp = AutoencoderImputer::fit(&trd, rank, &ae_config(rank, "ae"))?;
            let s = downstream(&imp.impute(&trd)?, &ytr, &imp.impute(&ted)?, &yte, lambda)?;
            finish(mlp_params(imp.network()), s, Some(rank))
        }
        Method::Gain => {
            let mut model = GainModel::new(
                ctx.masked.schema().clone(),
                ctx.config.gain.clone(),
                &mut ctx.seed.stream("gain-init"),
            )?;
            let tc = TrainConfig {
                seed: ctx.seed.derive("gain-train", &[]),
                ..ctx.config.train.clone()
            };
            train(&mut model, &trd, &tc)?;
            let k = ctx.config.draws;
            let imp_tr = impute(&model, &trd, k, ctx.seed.derive("gain-impute-train", &[]))?;
            let imp_te = impute(&model, &ted, k, ctx.seed.derive("gain-impute-test", &[]))?;
            let mut fp = mlp_params(&model.generator);
            fp.extend(mlp_params(&model.discriminator));
            let schema = ctx.masked.schema();
            let pairs: Vec<(Vec<RawRecord>, Vec<RawRecord>)> = match ctx.config.aggregation {
                Aggregation::PerDraw => imp_tr.completions.into_iter().zip(imp_te.completions).collect(),
                Aggregation::Modal => vec![(imp_tr.modal_completion(), imp_te.modal_completion())],
            };
            let (mut acc, mut auc) = (0.0, 0.0);
            let draws = pairs.len() as f64;
            for (a, b) in &pairs {
                let s = downstream(
                    &records_to_binary(a, schema)?,
                    &ytr,
                    &records_to_binary(b, schema)?,
                    &yte,
                    lambda,
                )?;
                acc += s.accuracy;
                auc += s.auroc;
                fp.extend(s.params);
            }
            Ok(FoldOutcome {
                accuracy: acc / draws,
                auroc: auc / draws,
                fingerprint: fp,
                rank: None,
            })
        }
    }
}

/// Runs every `proportion × method × fold` cell on one thread. Cell
/// failures are recorded in the report and do not stop the other cells.
pub fn run_benchmark(data: &FuzzyDataset, labels: &[f64], config: &BenchmarkConfig) -> Result<EvalReport, EvalError> {
    run_benchmark_with_jobs(data, labels, config, 1)
}

/// As [`run_benchmark`], spreading cells over up to `jobs` threads. Every
/// cell owns its seed substreams, so the report does not depend on `jobs`.
pub fn run_benchmark_with_jobs(
    data: &FuzzyDataset,
    labels: &[f64],
    config: &BenchmarkConfig,
    jobs: usize,
) -> Result<EvalReport, EvalError> {
    config.validate()?;
    if labels.len() != data.n_rows() {
        return Err(EvalError::Length(format!("{} labels for {} rows", labels.len(), data.n_rows())));
    }
    if labels.iter().any(|&y| y != 0.0 && y != 1.0) {
        return Err(EvalError::InvalidLabel);
    }
    let folds = kfold_split(data.n_rows(), config.folds, config.seed.derive("folds", &[]))?;
    let masked: Vec<FuzzyDataset> = config
        .proportions
        .iter()
        .map(|&p| mask_dataset(data, &config.masking_plan(p)).0)
        .collect();
    let cells: Vec<(usize, Method, usize)> = (0..config.proportions.len())
        .flat_map(|pi| {
            config
                .methods
                .iter()
                .flat_map(move |&m| (0..config.folds).map(move |f| (pi, m, f)))
        })
        .collect();

    let run_cell = |&(pi, method, f): &(usize, Method, usize)| {
        let prop = config.proportions[pi];
        let train = complement(&folds, f);
        let ctx = FoldContext {
            complete: data,
            masked: &masked[pi],
            labels,
            train: &train,
            test: &folds[f],
            config,
            seed: config.fold_seed(method, prop, f),
        };
        evaluate_fold(&ctx, method).map_err(|e| e.to_string())
    };
    let results: Vec<Result<FoldOutcome, String>> = if jobs <= 1 || cells.len() <= 1 {
        cells.iter().map(run_cell).collect()
    } else {
        let next = AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<Result<FoldOutcome, String>>>> = cells.iter().map(|_| Mutex::new(None)).collect();
        std::thread::scope(|s| {
            for _ in 0..jobs.min(cells.len()) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= cells.len() {
                        break;
                    }
                    let r = run_cell(&cells[i]);
                    *slots[i].lock().expect("result slot") = Some(r);
                });
            }
        });
        slots
            .into_iter()
            .map(|m| m.into_inner().expect("result slot").expect("every cell ran"))
            .collect()
    };

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let mut selected_ranks = Vec::new();
    for (group, outcomes) in cells.chunks(config.folds).zip(results.chunks(config.folds)) {
        let (pi, method, _) = group[0];
        let prop = config.proportions[pi];
        let mut acc = Vec::with_capacity(outcomes.len());
        let mut auc = Vec::with_capacity(outcomes.len());
        for (&(_, _, f), outcome) in group.iter().zip(outcomes) {
            match outcome {
                Ok(o) => {
                    acc.push(Some(o.accuracy));
                    auc.push(Some(o.auroc));
                    if let (true, Some(r)) = (method.tuned(), o.rank) {
                        selected_ranks.push((prop, method.as_str().to_string(), f, r));
                    }
                }
                Err(message) => {
                    acc.push(None);
                    auc.push(None);
                    errors.push(CellError {
                        proportion: prop,
                        method: method.as_str().to_string(),
                        fold: f,
                        message: message.clone(),
                    });
                }
            }
        }
        rows.push(ReportRow::new(prop, method.as_str(), "accuracy", acc));
        rows.push(ReportRow::new(prop, method.as_str(), "auroc", auc));
    }
    Ok(EvalReport {
        metadata: ReportMetadata {
            master_seed: config.seed,
            schema_hash: data.schema().hash_hex(),
            n_rows: data.n_rows(),
            positive_rate: labels.iter().sum::<f64>() / labels.len() as f64,
            prefill: "column-mean".into(),
            config: config.clone(),
        },
        rows,
        errors,
        selected_ranks,
    })
}

/// Copy of `data` in which every observed cell of `rows` is moved to a
/// different value (next category, complemented label set, `1 − v`) and
/// re-coded with fresh fuzzy codes.
pub fn perturb_rows(data: &FuzzyDataset, rows: &[usize], seed: Seed) -> Result<FuzzyDataset, EvalError> {
    let schema = data.schema();
    let mut records = data.records();
    for &i in rows {
        for (cell, spec) in records[i].cells.iter_mut().zip(schema.features()) {
            *cell = match (&*cell, spec.kind) {
                (Cell::Missing, _) => Cell::Missing,
                (Cell::Class(c), _) => Cell::Class((c + 1) % spec.cardinality),
                (Cell::Labels(l), FeatureKind::Multilabel) => {
                    Cell::labels((0..spec.cardinality).filter(|k| !l.contains(k)))
                }
                (Cell::Numeric(v), _) => Cell::Numeric(1.0 - v),
                (other, _) => other.clone(),
            };
        }
    }
    let fresh = encode_dataset(&records, schema, &mut seed.stream("perturb"))?;
    Ok(data.splice_rows(rows, &fresh)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeakageAudit {
    pub method: Method,
    pub proportion: f64,
    pub fold: usize,
    pub parameters: usize,
    /// Fitted parameters bit-identical with and without the test-row perturbation.
    pub identical: bool,
}

/// Fits one cell twice, once as-is and once with the test fold's features
/// and labels perturbed, and compares every fitted parameter bit for bit.
pub fn audit_leakage(
    data: &FuzzyDataset,
    labels: &[f64],
    config: &BenchmarkConfig,
    method: Method,
    proportion: f64,
    fold: usize,
) -> Result<LeakageAudit, EvalError> {
    let folds = kfold_split(data.n_rows(), config.folds, config.seed.derive("folds", &[]))?;
    let test = folds
        .get(fold)
        .ok_or_else(|| EvalError::InvalidConfig(format!("fold {fold} out of range")))?;
    let train = complement(&folds, fold);
    let perturbed = perturb_rows(data, test, config.seed.derive("audit", &[fold as u64]))?;
    let mut flipped = labels.to_vec();
    for &i in test {
        flipped[i] = 1.0 - flipped[i];
    }
    let plan = config.masking_plan(proportion);
    let run = |d: &FuzzyDataset, y: &[f64]| {
        let (masked, _) = mask_dataset(d, &plan);
        evaluate_fold(
            &FoldContext {
                complete: d,
                masked: &masked,
                labels: y,
                train: &train,
                test,
                config,
                seed: config.fold_seed(method, proportion, fold),
            },
            method,
        )
    };
    let a = run(data, labels)?;
    let b = run(&perturbed, &flipped)?;
    let identical = a.fingerprint.len() == b.fingerprint.len()
        && a.fingerprint.iter().zip(&b.fingerprint).all(|(x, y)| x.to_bits() == y.to_bits());
    Ok(LeakageAudit {
        method,
        proportion,
        fold,
        parameters: a.fingerprint.len(),
        identical,
    })
}
