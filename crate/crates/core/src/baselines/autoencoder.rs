use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::mean::{column_means, prefill, restore_observed};
use super::BaselineError;
use crate::codec::{FeatureSchema, FuzzyDataset};
use crate::linalg::Matrix;
use crate::nn::{clamp_prob, Activation, Adam, AdamConfig, Mlp, PROB_EPS};
use crate::rng::Seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AutoencoderConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    pub seed: Seed,
}

impl Default for AutoencoderConfig {
    fn default() -> Self {
        AutoencoderConfig {
            epochs: 500,
            batch_size: 64,
            adam: AdamConfig::default(),
            seed: Seed(0),
        }
    }
}

/// `Q → r (tanh) → Q (sigmoid)` auto-encoder trained by cross-entropy on the
/// observed slots of mean-pre-filled rows.
#[derive(Clone, Debug, PartialEq)]
pub struct AutoencoderImputer {
    schema: FeatureSchema,
    means: Vec<f64>,
    net: Mlp,
    losses: Vec<f64>,
}

/// Row-summed masked cross-entropy and its gradient w.r.t. the outputs
/// (scaled by `1/n_total`).
fn masked_bce(out: &Matrix, target: &Matrix, mask: &Matrix, scale: f64) -> (f64, Matrix) {
    let mut grad = Matrix::zeros(out.rows(), out.cols());
    let mut loss = 0.0;
    for ((g, (&p, &t)), &m) in grad
        .as_mut_slice()
        .iter_mut()
        .zip(out.as_slice().iter().zip(target.as_slice()))
        .zip(mask.as_slice())
    {
        if m == 0.0 {
            continue;
        }
        let pc = clamp_prob(p);
        loss -= t * pc.ln() + (1.0 - t) * (1.0 - pc).ln();
        if (PROB_EPS..=1.0 - PROB_EPS).contains(&p) {
            *g = scale * (p - t) / (p * (1.0 - p));
        }
    }
    (loss, grad)
}

impl AutoencoderImputer {
    pub fn fit(train: &FuzzyDataset, rank: usize, config: &AutoencoderConfig) -> Result<Self, BaselineError> {
        let schema = train.schema().clone();
        let q = schema.width();
        let n = train.n_rows();
        if n == 0 {
            return Err(BaselineError::EmptyTraining);
        }
        if rank == 0 {
            return Err(BaselineError::InvalidRank { rank, max: q });
        }
        let means = column_means(train.binary(), train.mask(), &schema);
        let input = prefill(train.binary(), train.mask(), &means);
        let mut net = Mlp::glorot(
            &[q, rank, q],
            Activation::Tanh,
            Activation::Sigmoid,
            &mut config.seed.stream("ae-init"),
        )?;
        let mut opt = Adam::new(config.adam);
        let mut order: Vec<usize> = (0..n).collect();
        let mut losses = Vec::with_capacity(config.epochs);
        let batch = config.batch_size.max(1);
        for epoch in 0..config.epochs {
            order.shuffle(&mut config.seed.substream("ae-shuffle", &[epoch as u64]));
            let mut total = 0.0;
            for idx in order.chunks(batch) {
                let x = input.select_rows(idx);
                let cache = net.forward(&x)?;
                let (loss, d_out) = masked_bce(
                    cache.output(),
                    &train.binary().select_rows(idx),
                    &train.mask().select_rows(idx),
                    1.0 / idx.len() as f64,
                );
                let (grads, _) = net.backward(&cache, &d_out)?;
                if !loss.is_finite() || opt.step_mlp(&mut net, &grads).is_err() {
                    return Err(BaselineError::Divergence { epoch, losses });
                }
                total += loss;
            }
            losses.push(total / n as f64);
        }
        Ok(AutoencoderImputer {
            schema,
            means,
            net,
            losses,
        })
    }

    /// Per-epoch mean training loss.
    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    pub fn network(&self) -> &Mlp {
        &self.net
    }

    pub fn impute(&self, target: &FuzzyDataset) -> Result<Matrix, BaselineError> {
        if target.schema() != &self.schema {
            return Err(BaselineError::SchemaMismatch);
        }
        let filled = prefill(target.binary(), target.mask(), &self.means);
        let mut out = self.net.predict(&filled)?;
        restore_observed(&mut out, target.binary(), target.mask());
        Ok(out)
    }
}
