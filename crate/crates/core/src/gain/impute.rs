use serde::Serialize;

use super::model::pass_through;
use super::sampling::sample_seeds;
use super::{GainError, GainModel};
use crate::codec::{decode, encode_binary, Cell, FeatureKind, FeatureSchema, FuzzyDataset, RawRecord};
use crate::linalg::Matrix;
use crate::rng::Seed;

/// Half-width of the window within which numeric draws count as agreeing
/// with their mean.
pub const NUMERIC_AGREEMENT_WINDOW: f64 = 0.05;

/// Agreement of the `k` draws on one originally missing cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellAgreement {
    pub row: usize,
    pub feature: usize,
    /// Most frequent imputed value (ties go to the value seen first). For
    /// numeric features, the mean of the draws.
    pub modal: Cell,
    /// Share of draws equal to `modal`, in `(0, 1]`.
    pub frequency: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImputationResult {
    /// `k` completed copies of the dataset, decoded to records.
    pub completions: Vec<Vec<RawRecord>>,
    /// One entry per missing cell, in row-major order.
    pub agreement: Vec<CellAgreement>,
}

impl ImputationResult {
    pub fn draws(&self) -> usize {
        self.completions.len()
    }

    /// Per-cell majority completion across the draws.
    pub fn modal_completion(&self) -> Vec<RawRecord> {
        let mut out = self.completions.first().cloned().unwrap_or_default();
        for a in &self.agreement {
            out[a.row].cells[a.feature] = a.modal.clone();
        }
        out
    }

    /// Binary-coded matrix (`n × Q`) of one completion.
    pub fn binary(&self, draw: usize, schema: &FeatureSchema) -> Result<Matrix, GainError> {
        Ok(records_to_binary(&self.completions[draw], schema)?)
    }
}

/// Binary codes of fully observed records, one row each.
pub fn records_to_binary(records: &[RawRecord], schema: &FeatureSchema) -> Result<Matrix, crate::codec::CodecError> {
    let mut m = Matrix::zeros(records.len(), schema.width());
    for (i, r) in records.iter().enumerate() {
        let (z, _) = encode_binary(r, schema)?;
        m.row_mut(i).copy_from_slice(&z);
    }
    Ok(m)
}

/// One generator draw: fresh seeds for every row, pass-through of observed
/// blocks, then decoding of each missing block.
fn draw(model: &GainModel, data: &FuzzyDataset, seed: Seed) -> Result<Vec<RawRecord>, GainError> {
    let params = model.params();
    let schema = data.schema();
    let (n, q) = (data.n_rows(), schema.width());
    let mut rng = seed.stream("seeds");
    let mut seeds = Matrix::zeros(n, q);
    for r in 0..n {
        seeds
            .row_mut(r)
            .copy_from_slice(&sample_seeds(q, params.seed_low, params.seed_high, &mut rng));
    }
    let values = data.coded(params.coding);
    let (raw, _) = model.generate(values, data.mask(), &seeds)?;
    let combined = pass_through(values, data.mask(), &raw);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut rec = data.record(i);
        for (j, (spec, block)) in schema.blocks().enumerate() {
            if data.mu()[(i, j)] == 0.0 {
                rec.cells[j] = decode(&combined.row(i)[block], spec);
            }
        }
        out.push(rec);
    }
    Ok(out)
}

fn agreement_for(kind: FeatureKind, values: Vec<&Cell>) -> (Cell, f64) {
    let k = values.len() as f64;
    if kind == FeatureKind::Numeric {
        let xs: Vec<f64> = values
            .iter()
            .map(|c| match c {
                Cell::Numeric(v) => *v,
                _ => f64::NAN,
            })
            .collect();
        let mean = xs.iter().sum::<f64>() / k;
        let near = xs
            .iter()
            .filter(|&&v| (v - mean).abs() <= NUMERIC_AGREEMENT_WINDOW)
            .count();
        // at least one draw is always counted so the frequency stays positive
        return (Cell::Numeric(mean), near.max(1) as f64 / k);
    }
    let mut counts: Vec<(&Cell, usize)> = Vec::new();
    for c in values {
        match counts.iter_mut().find(|(seen, _)| *seen == c) {
            Some(entry) => entry.1 += 1,
            None => counts.push((c, 1)),
        }
    }
    let mut best = 0;
    for (i, &(_, n)) in counts.iter().enumerate() {
        if n > counts[best].1 {
            best = i;
        }
    }
    (counts[best].0.clone(), counts[best].1 as f64 / k)
}

/// `k`-fold multiple imputation. Draw `d` uses the substream derived from
/// `seed` and `d`, so draws are independent and individually reproducible.
pub fn impute(model: &GainModel, data: &FuzzyDataset, k: usize, seed: Seed) -> Result<ImputationResult, GainError> {
    if data.schema() != model.schema() {
        return Err(GainError::SchemaMismatch);
    }
    if k == 0 {
        return Err(GainError::InvalidConfig("k must be at least 1".into()));
    }
    let completions = (0..k)
        .map(|d| draw(model, data, seed.derive("draw", &[d as u64])))
        .collect::<Result<Vec<_>, _>>()?;

    let schema = data.schema();
    let mut agreement = Vec::new();
    for row in 0..data.n_rows() {
        for (feature, spec) in schema.features().iter().enumerate() {
            if data.mu()[(row, feature)] != 0.0 {
                continue;
            }
            let cells = completions.iter().map(|c| &c[row].cells[feature]).collect();
            let (modal, frequency) = agreement_for(spec.kind, cells);
            agreement.push(CellAgreement {
                row,
                feature,
                modal,
                frequency,
            });
        }
    }
    Ok(ImputationResult {
        completions,
        agreement,
    })
}
