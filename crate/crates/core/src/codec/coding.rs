use rand::Rng;

use super::{Cell, CodecError, FeatureKind, FeatureSchema, FeatureSpec, RawRecord};

/// Multilabel decision boundary; `x >= 0.5` decodes as active.
pub const MULTILABEL_THRESHOLD: f64 = 0.5;

/// Regular binary coding: one-hot / multi-hot blocks, zeros for missing
/// features. Returns the coded row `z̄` (width `Q`) and the feature mask `μ`
/// (width `p`).
pub fn encode_binary(
    record: &RawRecord,
    schema: &FeatureSchema,
) -> Result<(Vec<f64>, Vec<f64>), CodecError> {
    record.validate(schema)?;
    let mut z = vec![0.0; schema.width()];
    let mut mu = vec![0.0; schema.len()];
    for (j, (cell, (_, block))) in record.cells.iter().zip(schema.blocks()).enumerate() {
        let dst = &mut z[block];
        match cell {
            Cell::Missing => continue,
            Cell::Class(k) => dst[*k] = 1.0,
            Cell::Labels(ks) => ks.iter().for_each(|&k| dst[k] = 1.0),
            Cell::Numeric(v) => dst[0] = *v,
        }
        mu[j] = 1.0;
    }
    Ok((z, mu))
}

/// Fuzzy code of a one-hot block: inactive entries `~ U[0, 1/q)`, the active
/// entry takes the remaining mass, so the block sums to one and the active
/// entry is the strict maximum.
pub fn fuzzify_multiclass<R: Rng + ?Sized>(z: &[f64], rng: &mut R) -> Result<Vec<f64>, CodecError> {
    let q = z.len();
    if q == 0 {
        return Err(CodecError::Encoding("empty multiclass block".into()));
    }
    let ones = z.iter().filter(|&&v| v == 1.0).count();
    let zeros = z.iter().filter(|&&v| v == 0.0).count();
    if ones != 1 || zeros != q - 1 {
        return Err(CodecError::Encoding(format!(
            "multiclass block is not one-hot: {z:?}"
        )));
    }
    let upper = 1.0 / q as f64;
    let mut x = vec![0.0; q];
    let mut inactive_mass = 0.0;
    let mut active = 0;
    for (k, (&zk, xk)) in z.iter().zip(x.iter_mut()).enumerate() {
        if zk == 1.0 {
            active = k;
        } else {
            *xk = rng.gen_range(0.0..upper);
            inactive_mass += *xk;
        }
    }
    x[active] = 1.0 - inactive_mass;
    Ok(x)
}

/// Fuzzy code of a multi-hot block: inactive entries `~ U[0, 0.5)`, active
/// entries `~ U[0.5, 1]`.
pub fn fuzzify_multilabel<R: Rng + ?Sized>(z: &[f64], rng: &mut R) -> Result<Vec<f64>, CodecError> {
    z.iter()
        .map(|&zk| {
            if zk == 1.0 {
                Ok(rng.gen_range(MULTILABEL_THRESHOLD..=1.0))
            } else if zk == 0.0 {
                Ok(rng.gen_range(0.0..MULTILABEL_THRESHOLD))
            } else {
                Err(CodecError::Encoding(format!(
                    "multilabel block is not binary: {z:?}"
                )))
            }
        })
        .collect()
}

/// Fuzzifies one observed block according to its feature kind. Numeric blocks
/// pass through unchanged.
pub fn fuzzify_block<R: Rng + ?Sized>(
    spec: &FeatureSpec,
    z: &[f64],
    rng: &mut R,
) -> Result<Vec<f64>, CodecError> {
    match spec.kind {
        FeatureKind::Multiclass => fuzzify_multiclass(z, rng),
        FeatureKind::Multilabel => fuzzify_multilabel(z, rng),
        FeatureKind::Numeric => Ok(z.to_vec()),
    }
}

/// Recovers the category information from a (fuzzy, generated or binary)
/// block. Multiclass ties resolve to the lowest index.
pub fn decode(x: &[f64], spec: &FeatureSpec) -> Cell {
    match spec.kind {
        FeatureKind::Multiclass => {
            let mut best = 0;
            for (k, &v) in x.iter().enumerate().skip(1) {
                if v > x[best] {
                    best = k;
                }
            }
            Cell::Class(best)
        }
        FeatureKind::Multilabel => Cell::Labels(
            x.iter()
                .enumerate()
                .filter(|(_, &v)| v >= MULTILABEL_THRESHOLD)
                .map(|(k, _)| k)
                .collect(),
        ),
        FeatureKind::Numeric => Cell::Numeric(x[0]),
    }
}

/// Expands the feature mask `μ` (width `p`) into the coded mask `m̄` (width
/// `Q`) by repeating `μ_j` across block `j`.
pub fn build_masks(mu: &[f64], schema: &FeatureSchema) -> Vec<f64> {
    assert_eq!(mu.len(), schema.len(), "mask length must equal feature count");
    let mut m = vec![0.0; schema.width()];
    for (j, (_, block)) in schema.blocks().enumerate() {
        m[block].fill(mu[j]);
    }
    m
}

/// Inverse of [`build_masks`]: a feature is observed when any entry of its
/// block is set.
pub fn collapse_mask(m: &[f64], schema: &FeatureSchema) -> Vec<f64> {
    assert_eq!(m.len(), schema.width(), "mask length must equal coded width");
    schema
        .blocks()
        .map(|(_, block)| {
            if m[block].iter().any(|&v| v != 0.0) {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::FeatureSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    fn schema() -> FeatureSchema {
        FeatureSchema::new(vec![
            FeatureSpec::multiclass("a", 3),
            FeatureSpec::multiclass("b", 2),
            FeatureSpec::multilabel("c", 3),
        ])
        .unwrap()
    }

    #[test]
    fn binary_coding_examples() {
        let s = schema();
        let r = RawRecord::new(vec![Cell::Class(1), Cell::Missing, Cell::labels([0, 2])]);
        let (z, mu) = encode_binary(&r, &s).unwrap();
        assert_eq!(z, vec![0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        assert_eq!(mu, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn binary_coding_rejects_out_of_range() {
        let s = schema();
        let r = RawRecord::new(vec![Cell::Class(3), Cell::Missing, Cell::Missing]);
        assert!(matches!(
            encode_binary(&r, &s),
            Err(CodecError::SchemaViolation { .. })
        ));
        let r = RawRecord::new(vec![Cell::Missing, Cell::Missing, Cell::labels([5])]);
        assert!(encode_binary(&r, &s).is_err());
        let r = RawRecord::new(vec![Cell::Missing, Cell::Missing]);
        assert!(matches!(
            encode_binary(&r, &s),
            Err(CodecError::RecordWidth { .. })
        ));
        let r = RawRecord::new(vec![Cell::labels([0]), Cell::Missing, Cell::Missing]);
        assert!(encode_binary(&r, &s).is_err());
    }

    #[test]
    fn multiclass_fuzzy_bounds() {
        let mut rng = rng();
        for _ in 0..200 {
            let x = fuzzify_multiclass(&[0.0, 1.0, 0.0], &mut rng).unwrap();
            assert!(x[0] >= 0.0 && x[0] < 1.0 / 3.0);
            assert!(x[2] >= 0.0 && x[2] < 1.0 / 3.0);
            assert_eq!(x[1], 1.0 - (x[0] + x[2]));
            assert!(x[1] > 1.0 / 3.0);
            assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn multiclass_degenerate_and_invalid() {
        let mut rng = rng();
        assert_eq!(fuzzify_multiclass(&[1.0], &mut rng).unwrap(), vec![1.0]);
        assert!(fuzzify_multiclass(&[1.0, 1.0], &mut rng).is_err());
        assert!(fuzzify_multiclass(&[0.0, 0.0], &mut rng).is_err());
        assert!(fuzzify_multiclass(&[0.5, 0.5], &mut rng).is_err());
        assert!(fuzzify_multiclass(&[], &mut rng).is_err());
    }

    #[test]
    fn multilabel_fuzzy_bounds() {
        let mut rng = rng();
        for _ in 0..200 {
            let x = fuzzify_multilabel(&[1.0, 0.0, 1.0], &mut rng).unwrap();
            assert!(x[0] >= 0.5 && x[0] <= 1.0);
            assert!(x[1] >= 0.0 && x[1] < 0.5);
            assert!(x[2] >= 0.5 && x[2] <= 1.0);
            let y = fuzzify_multilabel(&[0.0, 0.0], &mut rng).unwrap();
            assert!(y.iter().all(|&v| v < 0.5));
        }
        assert!(fuzzify_multilabel(&[0.3], &mut rng).is_err());
    }

    #[test]
    fn decode_examples() {
        let mc = FeatureSpec::multiclass("a", 3);
        let ml = FeatureSpec::multilabel("b", 3);
        assert_eq!(decode(&[0.1, 0.8, 0.1], &mc), Cell::Class(1));
        assert_eq!(decode(&[0.4, 0.4, 0.2], &mc), Cell::Class(0));
        assert_eq!(decode(&[0.2, 0.4, 0.4], &mc), Cell::Class(1));
        assert_eq!(decode(&[0.5, 0.49, 1.0], &ml), Cell::Labels(vec![0, 2]));
        assert_eq!(
            decode(&[0.3], &FeatureSpec::numeric("n")),
            Cell::Numeric(0.3)
        );
    }

    #[test]
    fn mask_expansion() {
        let s = FeatureSchema::new(vec![
            FeatureSpec::multiclass("a", 3),
            FeatureSpec::multiclass("b", 2),
        ])
        .unwrap();
        assert_eq!(build_masks(&[1.0, 0.0], &s), vec![1.0, 1.0, 1.0, 0.0, 0.0]);
        assert_eq!(build_masks(&[1.0, 1.0], &s), vec![1.0; 5]);
        assert_eq!(build_masks(&[0.0, 0.0], &s), vec![0.0; 5]);
        for mu in [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]] {
            assert_eq!(collapse_mask(&build_masks(&mu, &s), &s), mu.to_vec());
        }
    }
}
