use rand::Rng;

use super::EvalError;
use crate::rng::Seed;

/// Share of scores on the correct side of 0.5 (`score ≥ 0.5` predicts 1).
pub fn accuracy(scores: &[f64], labels: &[f64]) -> Result<f64, EvalError> {
    if scores.len() != labels.len() || scores.is_empty() {
        return Err(EvalError::Length(format!("{} scores vs {} labels", scores.len(), labels.len())));
    }
    let hits = scores
        .iter()
        .zip(labels)
        .filter(|(&s, &y)| (s >= 0.5) == (y == 1.0))
        .count();
    Ok(hits as f64 / scores.len() as f64)
}

/// Area under the ROC curve via the rank-sum statistic, ties counted as one
/// half.
pub fn auroc(scores: &[f64], labels: &[f64]) -> Result<f64, EvalError> {
    if scores.len() != labels.len() {
        return Err(EvalError::Length(format!("{} scores vs {} labels", scores.len(), labels.len())));
    }
    if labels.iter().any(|&y| y != 0.0 && y != 1.0) {
        return Err(EvalError::InvalidLabel);
    }
    let pos = labels.iter().filter(|&&y| y == 1.0).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(EvalError::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks are 1-based; a tie group shares the average rank
        let avg = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += avg * order[i..=j].iter().filter(|&&k| labels[k] == 1.0).count() as f64;
        i = j + 1;
    }
    let (p, n) = (pos as f64, neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

/// Constant score equal to the positive-class frequency of the training labels.
pub fn most_popular_scores(train_labels: &[f64], n_test: usize) -> Vec<f64> {
    let freq = train_labels.iter().sum::<f64>() / train_labels.len().max(1) as f64;
    vec![freq; n_test]
}

pub fn random_scores(n: usize, seed: Seed) -> Vec<f64> {
    let mut rng = seed.stream("random-scores");
    (0..n).map(|_| rng.gen()).collect()
}

/// Mean and population standard deviation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
