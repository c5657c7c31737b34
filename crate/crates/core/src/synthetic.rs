//! Synthetic categorical corpora with known dependency structure.

use rand::Rng;

use crate::codec::{Cell, FeatureSchema, FeatureSpec, RawRecord};
use crate::rng::Seed;

/// Number of latent groups driving [`dependent_corpus`].
pub const LATENT_GROUPS: usize = 4;

/// `n` records over `p` features that all depend on one hidden group label.
///
/// Even-indexed features are multiclass with 3 or 4 categories, odd-indexed
/// ones multilabel with 2 or 3 labels. Each cell takes the value its group
/// prescribes, except with probability `noise` where it is drawn uniformly.
pub fn dependent_corpus(n: usize, p: usize, noise: f64, seed: Seed) -> (FeatureSchema, Vec<RawRecord>) {
    let specs: Vec<FeatureSpec> = (0..p)
        .map(|j| {
            if j % 2 == 0 {
                FeatureSpec::multiclass(format!("c{j}"), 3 + (j / 2) % 2)
            } else {
                FeatureSpec::multilabel(format!("l{j}"), 2 + (j / 2) % 2)
            }
        })
        .collect();
    let schema = FeatureSchema::new(specs).expect("generated names are unique");
    let mut rng = seed.stream("synthetic");
    let records = (0..n)
        .map(|_| {
            let z = rng.gen_range(0..LATENT_GROUPS);
            let cells = schema
                .features()
                .iter()
                .enumerate()
                .map(|(j, spec)| {
                    let q = spec.cardinality;
                    let noisy = rng.gen_bool(noise);
                    if j % 2 == 0 {
                        let k = if noisy { rng.gen_range(0..q) } else { (z + j) % q };
                        Cell::Class(k)
                    } else if noisy {
                        Cell::labels((0..q).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>())
                    } else {
                        // group bits, rotated per feature
                        Cell::labels((0..q).filter(|&k| (z >> ((k + j) % 2)) & 1 == 1).collect::<Vec<_>>())
                    }
                })
                .collect();
            RawRecord::new(cells)
        })
        .collect();
    (schema, records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_conform_and_repeat() {
        let (s, r) = dependent_corpus(50, 15, 0.1, Seed(3));
        assert_eq!(s.len(), 15);
        assert!(r.iter().all(|rec| rec.validate(&s).is_ok()));
        assert_eq!(r, dependent_corpus(50, 15, 0.1, Seed(3)).1);
    }
}
