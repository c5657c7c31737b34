//! Per-row adversarial and similarity losses with their analytic gradients.
//!
//! Probabilities are clamped into `[ε, 1−ε]` before the log; the gradient of
//! a clamped entry is zero.

use crate::codec::{FeatureKind, FeatureSchema};
use crate::nn::{clamp_prob, PROB_EPS};

#[inline]
fn inside(p: f64) -> bool {
    (PROB_EPS..=1.0 - PROB_EPS).contains(&p)
}

/// Discriminator loss `−Σ_j μ_j log μ̂_j + (1−μ_j) log(1−μ̂_j)`.
pub fn loss_d(mu: &[f64], mu_hat: &[f64]) -> f64 {
    assert_eq!(mu.len(), mu_hat.len());
    -mu.iter()
        .zip(mu_hat)
        .map(|(&m, &p)| {
            let p = clamp_prob(p);
            m * p.ln() + (1.0 - m) * (1.0 - p).ln()
        })
        .sum::<f64>()
}

pub fn loss_d_grad(mu: &[f64], mu_hat: &[f64]) -> Vec<f64> {
    mu.iter()
        .zip(mu_hat)
        .map(|(&m, &p)| {
            if inside(p) {
                -m / p + (1.0 - m) / (1.0 - p)
            } else {
                0.0
            }
        })
        .collect()
}

/// Generator adversarial loss `−Σ_j (1−μ_j) log μ̂_j`; only missing features
/// contribute.
pub fn loss_g(mu: &[f64], mu_hat: &[f64]) -> f64 {
    assert_eq!(mu.len(), mu_hat.len());
    -mu.iter()
        .zip(mu_hat)
        .map(|(&m, &p)| (1.0 - m) * clamp_prob(p).ln())
        .sum::<f64>()
}

pub fn loss_g_grad(mu: &[f64], mu_hat: &[f64]) -> Vec<f64> {
    mu.iter()
        .zip(mu_hat)
        .map(|(&m, &p)| if inside(p) { -(1.0 - m) / p } else { 0.0 })
        .collect()
}

/// Similarity loss between the raw generator heads and the observed codes,
/// observed blocks only.
///
/// Multiclass blocks use the cross-entropy `−Σ x log g` against the fuzzy
/// code. Multilabel blocks use the per-entry Bernoulli log-loss
/// `−x log g − (1−x) log(1−g)`, since their sigmoid entries are not coupled
/// by a normaliser. Numeric blocks use the squared error.
pub fn loss_sim(x: &[f64], raw: &[f64], mask: &[f64], schema: &FeatureSchema) -> f64 {
    assert_eq!(x.len(), schema.width());
    assert_eq!(raw.len(), schema.width());
    assert_eq!(mask.len(), schema.width());
    let mut total = 0.0;
    for (spec, block) in schema.blocks() {
        for k in block {
            let m = mask[k];
            if m == 0.0 {
                continue;
            }
            let (t, g) = (x[k], raw[k]);
            total += m * match spec.kind {
                FeatureKind::Multiclass => -t * clamp_prob(g).ln(),
                FeatureKind::Multilabel => {
                    let g = clamp_prob(g);
                    -t * g.ln() - (1.0 - t) * (1.0 - g).ln()
                }
                FeatureKind::Numeric => (t - g) * (t - g),
            };
        }
    }
    total
}

/// `∂ loss_sim / ∂ raw`.
pub fn loss_sim_grad(x: &[f64], raw: &[f64], mask: &[f64], schema: &FeatureSchema) -> Vec<f64> {
    let mut grad = vec![0.0; schema.width()];
    for (spec, block) in schema.blocks() {
        for k in block {
            let m = mask[k];
            if m == 0.0 {
                continue;
            }
            let (t, g) = (x[k], raw[k]);
            grad[k] = m * match spec.kind {
                FeatureKind::Multiclass if inside(g) => -t / g,
                FeatureKind::Multilabel if inside(g) => -t / g + (1.0 - t) / (1.0 - g),
                FeatureKind::Numeric => -2.0 * (t - g),
                _ => 0.0,
            };
        }
    }
    grad
}
