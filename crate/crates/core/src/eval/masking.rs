use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codec::{Cell, FuzzyDataset};
use crate::rng::Seed;

/// Completely-at-random masking of whole feature cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaskingPlan {
    pub proportion: f64,
    pub seed: Seed,
}

/// A cell hidden by [`mask_dataset`] together with its true value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaskedCell {
    pub row: usize,
    pub feature: usize,
    pub truth: Cell,
}

/// Hides each observed cell independently with probability
/// `plan.proportion`. One uniform is drawn per cell in row-major order
/// whether or not the cell is observed, so the draw for a cell does not
/// depend on the rest of the data.
pub fn mask_dataset(data: &FuzzyDataset, plan: &MaskingPlan) -> (FuzzyDataset, Vec<MaskedCell>) {
    let p = plan.proportion.clamp(0.0, 1.0);
    let mut rng = plan.seed.stream("mask");
    let mut hidden = Vec::new();
    let mut truth = Vec::new();
    for i in 0..data.n_rows() {
        let mut rec = None;
        for j in 0..data.schema().len() {
            let u: f64 = rng.gen();
            if data.mu()[(i, j)] == 0.0 || u >= p {
                continue;
            }
            let rec = rec.get_or_insert_with(|| data.record(i));
            hidden.push((i, j));
            truth.push(MaskedCell {
                row: i,
                feature: j,
                truth: rec.cells[j].clone(),
            });
        }
    }
    (data.hide(&hidden), truth)
}
