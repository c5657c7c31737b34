use rand::seq::SliceRandom;

use super::EvalError;
use crate::rng::Seed;

/// Shuffles `0..n` with the `folds` stream of `seed` and deals it into `k`
/// folds whose sizes differ by at most one.
pub fn kfold_split(n: usize, k: usize, seed: Seed) -> Result<Vec<Vec<usize>>, EvalError> {
    if k == 0 || n < k {
        return Err(EvalError::TooFewRows { n, k });
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut seed.stream("folds"));
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        let mut fold = idx[start..start + len].to_vec();
        fold.sort_unstable();
        folds.push(fold);
        start += len;
    }
    Ok(folds)
}

/// Indices of every fold except `held_out`, sorted.
pub(crate) fn complement(folds: &[Vec<usize>], held_out: usize) -> Vec<usize> {
    let mut out: Vec<usize> = folds
        .iter()
        .enumerate()
        .filter(|&(f, _)| f != held_out)
        .flat_map(|(_, v)| v.iter().copied())
        .collect();
    out.sort_unstable();
    out
}
