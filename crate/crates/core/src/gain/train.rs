use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::losses::{loss_d, loss_d_grad, loss_g, loss_g_grad, loss_sim, loss_sim_grad};
use super::model::{generator_input, pass_through};
use super::sampling::{sample_hints, sample_seeds};
use super::{GainError, GainModel};
use crate::codec::FuzzyDataset;
use crate::linalg::Matrix;
use crate::nn::{Adam, AdamConfig, MlpGrads};
use crate::rng::Seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    /// Re-draw the fuzzy codes before every epoch instead of once up front.
    pub refuzzify_each_epoch: bool,
    pub seed: Seed,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 500,
            batch_size: 64,
            adam: AdamConfig::default(),
            refuzzify_each_epoch: false,
            seed: Seed(0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochLosses {
    pub loss_d: f64,
    pub loss_g: f64,
    pub loss_sim: f64,
}

/// Per-epoch means (over rows) of the three losses.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainTrace {
    pub epochs: Vec<EpochLosses>,
}

impl TrainTrace {
    pub fn len(&self) -> usize {
        self.epochs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    pub fn loss_d(&self) -> Vec<f64> {
        self.epochs.iter().map(|e| e.loss_d).collect()
    }

    pub fn loss_g(&self) -> Vec<f64> {
        self.epochs.iter().map(|e| e.loss_g).collect()
    }

    pub fn loss_sim(&self) -> Vec<f64> {
        self.epochs.iter().map(|e| e.loss_sim).collect()
    }
}

/// One minibatch with everything the two players consume.
#[derive(Clone, Debug)]
pub struct Batch {
    pub values: Matrix,
    pub mask: Matrix,
    pub mu: Matrix,
    pub seeds: Matrix,
    pub hints: Matrix,
}

/// Row-summed losses of a batch, before averaging.
#[derive(Clone, Copy, Debug, Default)]
struct BatchLosses {
    d: f64,
    g: f64,
    sim: f64,
}

/// Gradient of the batch-mean discriminator loss w.r.t. the discriminator
/// parameters, with the generator held fixed. Also returns the batch-mean loss.
pub fn discriminator_gradients(model: &GainModel, batch: &Batch) -> Result<(MlpGrads, f64), GainError> {
    let (_, combined) = model.generate(&batch.values, &batch.mask, &batch.seeds)?;
    let (grads, sum) = discriminator_pass(model, &combined, batch)?;
    Ok((grads, sum / batch.values.rows() as f64))
}

fn discriminator_pass(model: &GainModel, combined: &Matrix, batch: &Batch) -> Result<(MlpGrads, f64), GainError> {
    let n = combined.rows() as f64;
    let cache = model.discriminator.forward(&combined.hstack(&batch.hints))?;
    let mu_hat = cache.output();
    let mut d_out = Matrix::zeros(mu_hat.rows(), mu_hat.cols());
    let mut total = 0.0;
    for r in 0..mu_hat.rows() {
        total += loss_d(batch.mu.row(r), mu_hat.row(r));
        for (d, g) in d_out
            .row_mut(r)
            .iter_mut()
            .zip(loss_d_grad(batch.mu.row(r), mu_hat.row(r)))
        {
            *d = g / n;
        }
    }
    let (grads, _) = model.discriminator.backward(&cache, &d_out)?;
    Ok((grads, total))
}

/// Gradient of the batch-mean generator objective `loss_g + λ·loss_sim`
/// w.r.t. the generator parameters, back-propagated through the (fixed)
/// discriminator. Returns the gradients and the batch-mean `loss_g`, `loss_sim`.
pub fn generator_gradients(model: &GainModel, batch: &Batch) -> Result<(MlpGrads, f64, f64), GainError> {
    let (grads, l) = generator_pass(model, batch)?;
    let n = batch.values.rows() as f64;
    Ok((grads, l.g / n, l.sim / n))
}

fn generator_pass(model: &GainModel, batch: &Batch) -> Result<(MlpGrads, BatchLosses), GainError> {
    let schema = model.schema();
    let (rows, q) = batch.values.shape();
    let n = rows as f64;
    let lambda = model.params().lambda_sim;

    let g_cache = model
        .generator
        .forward(&generator_input(&batch.values, &batch.mask, &batch.seeds))?;
    let raw = g_cache.output();
    let combined = pass_through(&batch.values, &batch.mask, raw);
    let d_cache = model.discriminator.forward(&combined.hstack(&batch.hints))?;
    let mu_hat = d_cache.output();

    let mut losses = BatchLosses::default();
    let mut d_mu_hat = Matrix::zeros(rows, mu_hat.cols());
    for r in 0..rows {
        losses.g += loss_g(batch.mu.row(r), mu_hat.row(r));
        for (d, g) in d_mu_hat
            .row_mut(r)
            .iter_mut()
            .zip(loss_g_grad(batch.mu.row(r), mu_hat.row(r)))
        {
            *d = g / n;
        }
    }
    let (_, d_input) = model.discriminator.backward(&d_cache, &d_mu_hat)?;

    let mut d_raw = Matrix::zeros(rows, q);
    for r in 0..rows {
        let (x, m, g) = (batch.values.row(r), batch.mask.row(r), raw.row(r));
        losses.sim += loss_sim(x, g, m, schema);
        let sim_grad = loss_sim_grad(x, g, m, schema);
        let d_combined = &d_input.row(r)[..q];
        for (k, d) in d_raw.row_mut(r).iter_mut().enumerate() {
            *d = (1.0 - m[k]) * d_combined[k] + lambda * sim_grad[k] / n;
        }
    }
    let (grads, _) = model.generator.backward(&g_cache, &d_raw)?;
    Ok((grads, losses))
}

/// Alternating adversarial training: per minibatch one discriminator update
/// on `loss_d`, then one generator update on `loss_g + λ·loss_sim`.
///
/// Seeds and hints are drawn per row from epoch-indexed substreams of
/// `config.seed`, so a run is fully determined by the model, data and config.
pub fn train(model: &mut GainModel, data: &FuzzyDataset, config: &TrainConfig) -> Result<TrainTrace, GainError> {
    if data.schema() != model.schema() {
        return Err(GainError::SchemaMismatch);
    }
    if data.n_rows() == 0 {
        return Err(GainError::EmptyDataset);
    }
    if config.batch_size == 0 {
        return Err(GainError::InvalidConfig("batch_size must be positive".into()));
    }
    let params = model.params().clone();
    let schema = model.schema().clone();
    let q = schema.width();
    let n = data.n_rows();

    let mut d_opt = Adam::new(config.adam);
    let mut g_opt = Adam::new(config.adam);
    let mut trace = TrainTrace::default();
    let mut order: Vec<usize> = (0..n).collect();
    let mut fresh = None;

    for epoch in 0..config.epochs {
        if config.refuzzify_each_epoch {
            let mut d = data.clone();
            d.refuzzify(&mut config.seed.substream("refuzzify", &[epoch as u64]))?;
            fresh = Some(d);
        }
        let values = fresh.as_ref().unwrap_or(data).coded(params.coding);
        order.shuffle(&mut config.seed.substream("shuffle", &[epoch as u64]));
        let mut seed_rng = config.seed.substream("seeds", &[epoch as u64]);
        let mut hint_rng = config.seed.substream("hints", &[epoch as u64]);
        let mut sums = BatchLosses::default();

        for idx in order.chunks(config.batch_size) {
            let mask = data.mask().select_rows(idx);
            let mut seeds = Matrix::zeros(idx.len(), q);
            let mut hints = Matrix::zeros(idx.len(), q);
            for r in 0..idx.len() {
                seeds.row_mut(r).copy_from_slice(&sample_seeds(
                    q,
                    params.seed_low,
                    params.seed_high,
                    &mut seed_rng,
                ));
                hints
                    .row_mut(r)
                    .copy_from_slice(&sample_hints(mask.row(r), &schema, params.hint_rate, &mut hint_rng));
            }
            let batch = Batch {
                values: values.select_rows(idx),
                mask,
                mu: data.mu().select_rows(idx),
                seeds,
                hints,
            };
            let diverged = |trace: &TrainTrace| GainError::Divergence {
                epoch,
                trace: trace.clone(),
            };

            let (_, combined) = model.generate(&batch.values, &batch.mask, &batch.seeds)?;
            let (d_grads, d_sum) = discriminator_pass(model, &combined, &batch)?;
            if !d_sum.is_finite() || d_opt.step_mlp(&mut model.discriminator, &d_grads).is_err() {
                return Err(diverged(&trace));
            }

            let (g_grads, l) = generator_pass(model, &batch)?;
            if !(l.g.is_finite() && l.sim.is_finite())
                || g_opt.step_mlp(&mut model.generator, &g_grads).is_err()
            {
                return Err(diverged(&trace));
            }
            sums.d += d_sum;
            sums.g += l.g;
            sums.sim += l.sim;
        }
        trace.epochs.push(EpochLosses {
            loss_d: sums.d / n as f64,
            loss_g: sums.g / n as f64,
            loss_sim: sums.sim / n as f64,
        });
    }
    Ok(trace)
}
