use super::BaselineError;
use crate::codec::{FeatureKind, FeatureSchema, FuzzyDataset};
use crate::linalg::Matrix;

/// Per-column mean over observed slots. Columns with no observed slot fall
/// back to `1/q` inside multiclass blocks and `0.5` elsewhere.
pub fn column_means(values: &Matrix, mask: &Matrix, schema: &FeatureSchema) -> Vec<f64> {
    let q = schema.width();
    let mut sum = vec![0.0; q];
    let mut count = vec![0usize; q];
    for (row, m) in values.row_iter().zip(mask.row_iter()) {
        for k in 0..q {
            if m[k] != 0.0 {
                sum[k] += row[k];
                count[k] += 1;
            }
        }
    }
    let mut means = vec![0.0; q];
    for (spec, block) in schema.blocks() {
        for k in block {
            means[k] = if count[k] > 0 {
                sum[k] / count[k] as f64
            } else if spec.kind == FeatureKind::Multiclass {
                1.0 / spec.cardinality as f64
            } else {
                0.5
            };
        }
    }
    means
}

/// Copy of `values` with every missing slot replaced by its column value.
pub fn prefill(values: &Matrix, mask: &Matrix, fill: &[f64]) -> Matrix {
    let mut out = values.clone();
    for i in 0..out.rows() {
        let m = mask.row(i);
        for (k, v) in out.row_mut(i).iter_mut().enumerate() {
            if m[k] == 0.0 {
                *v = fill[k];
            }
        }
    }
    out
}

/// Overwrites the observed slots of `imputed` with the originals.
pub fn restore_observed(imputed: &mut Matrix, original: &Matrix, mask: &Matrix) {
    for ((v, &o), &m) in imputed
        .as_mut_slice()
        .iter_mut()
        .zip(original.as_slice())
        .zip(mask.as_slice())
    {
        if m != 0.0 {
            *v = o;
        }
    }
}

pub fn avg_impute_matrix(
    train: &Matrix,
    train_mask: &Matrix,
    target: &Matrix,
    target_mask: &Matrix,
    schema: &FeatureSchema,
) -> Matrix {
    prefill(target, target_mask, &column_means(train, train_mask, schema))
}

/// Average imputation: training-set column means in every missing slot.
pub fn avg_impute(train: &FuzzyDataset, target: &FuzzyDataset) -> Result<Matrix, BaselineError> {
    if train.schema() != target.schema() {
        return Err(BaselineError::SchemaMismatch);
    }
    Ok(avg_impute_matrix(
        train.binary(),
        train.mask(),
        target.binary(),
        target.mask(),
        train.schema(),
    ))
}

/// No imputation: the binary codes with missing blocks left at zero.
pub fn no_impute(target: &FuzzyDataset) -> Matrix {
    target.binary().clone()
}
