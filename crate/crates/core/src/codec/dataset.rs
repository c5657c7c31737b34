use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{build_masks, decode, encode_binary, fuzzify_block, Cell, CodecError, FeatureSchema, RawRecord};
use crate::linalg::Matrix;

/// Which representation of the observed blocks a consumer works on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coding {
    /// Fuzzy binary codes (the default for adversarial training).
    #[default]
    Fuzzy,
    /// Plain one-hot / multi-hot codes.
    HardBinary,
}

/// A coded dataset: `n × Q` code matrices plus the feature mask `μ` (`n × p`)
/// and its block expansion `m̄` (`n × Q`).
///
/// Both the plain binary codes and their fuzzified version are kept so that
/// callers can train on either, and so the fuzzy codes can be re-sampled.
/// Missing blocks hold zeros in both matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyDataset {
    schema: FeatureSchema,
    binary: Matrix,
    values: Matrix,
    mu: Matrix,
    mask: Matrix,
}

/// Binary-codes and fuzzifies every record once. Errors from individual rows
/// are collected and returned together with their row indices.
pub fn encode_dataset<R: Rng + ?Sized>(
    records: &[RawRecord],
    schema: &FeatureSchema,
    rng: &mut R,
) -> Result<FuzzyDataset, CodecError> {
    let (n, p, q) = (records.len(), schema.len(), schema.width());
    let mut binary = Matrix::zeros(n, q);
    let mut mu = Matrix::zeros(n, p);
    let mut errors = Vec::new();
    for (i, r) in records.iter().enumerate() {
        match encode_binary(r, schema) {
            Ok((z, m)) => {
                binary.row_mut(i).copy_from_slice(&z);
                mu.row_mut(i).copy_from_slice(&m);
            }
            Err(e) => errors.push((i, e)),
        }
    }
    if !errors.is_empty() {
        return Err(CodecError::Rows(errors));
    }
    let mut data = FuzzyDataset::from_binary(schema.clone(), binary, mu)?;
    data.refuzzify(rng)?;
    Ok(data)
}

impl FuzzyDataset {
    /// Wraps already binary-coded rows. The fuzzy codes start out equal to the
    /// binary ones; call [`FuzzyDataset::refuzzify`] to sample them.
    pub fn from_binary(
        schema: FeatureSchema,
        binary: Matrix,
        mu: Matrix,
    ) -> Result<Self, CodecError> {
        let n = binary.rows();
        if binary.cols() != schema.width() || mu.cols() != schema.len() || mu.rows() != n {
            return Err(CodecError::InvalidSchema(format!(
                "matrix shapes {:?}/{:?} do not fit schema (p={}, Q={})",
                binary.shape(),
                mu.shape(),
                schema.len(),
                schema.width()
            )));
        }
        let mut mask = Matrix::zeros(n, schema.width());
        for i in 0..n {
            mask.row_mut(i)
                .copy_from_slice(&build_masks(mu.row(i), &schema));
        }
        let mut binary = binary;
        for (b, m) in binary.as_mut_slice().iter_mut().zip(mask.as_slice()) {
            if *m == 0.0 {
                *b = 0.0;
            }
        }
        Ok(FuzzyDataset {
            schema,
            values: binary.clone(),
            binary,
            mu,
            mask,
        })
    }

    /// Draws fresh fuzzy codes for every observed block.
    pub fn refuzzify<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(), CodecError> {
        for i in 0..self.n_rows() {
            for (j, (spec, block)) in self.schema.blocks().enumerate() {
                if self.mu[(i, j)] == 0.0 {
                    continue;
                }
                let x = fuzzify_block(spec, &self.binary.row(i)[block.clone()], rng)?;
                self.values.row_mut(i)[block].copy_from_slice(&x);
            }
        }
        Ok(())
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.binary.rows()
    }

    /// Fuzzy codes `x̄`.
    pub fn values(&self) -> &Matrix {
        &self.values
    }

    /// Plain binary codes `z̄`.
    pub fn binary(&self) -> &Matrix {
        &self.binary
    }

    pub fn coded(&self, coding: Coding) -> &Matrix {
        match coding {
            Coding::Fuzzy => &self.values,
            Coding::HardBinary => &self.binary,
        }
    }

    /// Feature mask `μ`, `n × p`.
    pub fn mu(&self) -> &Matrix {
        &self.mu
    }

    /// Coded mask `m̄`, `n × Q`.
    pub fn mask(&self) -> &Matrix {
        &self.mask
    }

    pub fn is_complete(&self) -> bool {
        self.mu.as_slice().iter().all(|&v| v == 1.0)
    }

    pub fn missing_cells(&self) -> usize {
        self.mu.as_slice().iter().filter(|&&v| v == 0.0).count()
    }

    pub fn select_rows(&self, idx: &[usize]) -> FuzzyDataset {
        FuzzyDataset {
            schema: self.schema.clone(),
            binary: self.binary.select_rows(idx),
            values: self.values.select_rows(idx),
            mu: self.mu.select_rows(idx),
            mask: self.mask.select_rows(idx),
        }
    }

    /// Copy with the listed `(row, feature)` cells marked missing and their
    /// blocks zeroed.
    pub fn hide(&self, cells: &[(usize, usize)]) -> FuzzyDataset {
        let mut out = self.clone();
        for &(i, j) in cells {
            let block = self.schema.block(j);
            out.mu[(i, j)] = 0.0;
            out.binary.row_mut(i)[block.clone()].fill(0.0);
            out.values.row_mut(i)[block.clone()].fill(0.0);
            out.mask.row_mut(i)[block].fill(0.0);
        }
        out
    }

    /// Copy in which the listed rows are taken from `source` (same shape and
    /// schema, rows addressed by the same indices).
    pub fn splice_rows(&self, rows: &[usize], source: &FuzzyDataset) -> Result<FuzzyDataset, CodecError> {
        if source.schema != self.schema || source.n_rows() != self.n_rows() {
            return Err(CodecError::InvalidSchema("splice source does not match".into()));
        }
        let mut out = self.clone();
        for &i in rows {
            out.binary.row_mut(i).copy_from_slice(source.binary.row(i));
            out.values.row_mut(i).copy_from_slice(source.values.row(i));
            out.mu.row_mut(i).copy_from_slice(source.mu.row(i));
            out.mask.row_mut(i).copy_from_slice(source.mask.row(i));
        }
        Ok(out)
    }

    /// Decodes row `i` back to a record; unobserved features are `Missing`.
    pub fn record(&self, i: usize) -> RawRecord {
        RawRecord::new(
            self.schema
                .blocks()
                .enumerate()
                .map(|(j, (spec, block))| {
                    if self.mu[(i, j)] == 0.0 {
                        Cell::Missing
                    } else {
                        decode(&self.values.row(i)[block], spec)
                    }
                })
                .collect(),
        )
    }

    pub fn records(&self) -> Vec<RawRecord> {
        (0..self.n_rows()).map(|i| self.record(i)).collect()
    }
}
