use rand::seq::index;
use rand::Rng;

use crate::codec::FeatureSchema;

/// Generator seeds, i.i.d. uniform in `[low, high)` at every coded position.
/// Only positions with `m̄ = 0` ever reach the network.
pub fn sample_seeds<R: Rng + ?Sized>(width: usize, low: f64, high: f64, rng: &mut R) -> Vec<f64> {
    if high <= low {
        return vec![low; width];
    }
    (0..width).map(|_| rng.gen_range(low..high)).collect()
}

/// Number of features neutralised per row: `round(hint_rate · p)`.
pub fn hinted_feature_count(hint_rate: f64, p: usize) -> usize {
    ((hint_rate * p as f64).round() as usize).min(p)
}

/// Hint vector: a copy of `m̄` in which `round(hint_rate · p)` whole feature
/// blocks, chosen uniformly without replacement, are set to 0.5.
pub fn sample_hints<R: Rng + ?Sized>(
    mask: &[f64],
    schema: &FeatureSchema,
    hint_rate: f64,
    rng: &mut R,
) -> Vec<f64> {
    assert_eq!(mask.len(), schema.width(), "mask width must equal Q");
    let mut h = mask.to_vec();
    let p = schema.len();
    let count = hinted_feature_count(hint_rate, p);
    if count > 0 {
        for j in index::sample(rng, p, count) {
            h[schema.block(j)].fill(0.5);
        }
    }
    h
}
