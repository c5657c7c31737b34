use serde::{Deserialize, Serialize};

use super::{CodecError, FeatureKind, FeatureSchema, FeatureSpec};

/// Value of one feature in one record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Missing,
    /// Category index of a multiclass feature.
    Class(usize),
    /// Active category indices of a multilabel feature, sorted and unique.
    Labels(Vec<usize>),
    /// Numeric value, already normalised to `[0, 1]`.
    Numeric(f64),
}

impl Cell {
    /// Multilabel cell from any index collection; sorts and deduplicates.
    pub fn labels(indices: impl IntoIterator<Item = usize>) -> Cell {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Cell::Labels(v)
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    pub fn check(&self, spec: &FeatureSpec) -> Result<(), CodecError> {
        let violation = |reason: String| {
            Err(CodecError::SchemaViolation {
                feature: spec.name.clone(),
                reason,
            })
        };
        match (self, spec.kind) {
            (Cell::Missing, _) => Ok(()),
            (Cell::Class(k), FeatureKind::Multiclass) => {
                if *k < spec.cardinality {
                    Ok(())
                } else {
                    violation(format!(
                        "category index {k} out of range for {} categories",
                        spec.cardinality
                    ))
                }
            }
            (Cell::Labels(ks), FeatureKind::Multilabel) => {
                if let Some(k) = ks.iter().find(|&&k| k >= spec.cardinality) {
                    return violation(format!(
                        "label index {k} out of range for {} categories",
                        spec.cardinality
                    ));
                }
                if ks.windows(2).any(|w| w[0] >= w[1]) {
                    return violation("label indices must be sorted and unique".into());
                }
                Ok(())
            }
            (Cell::Numeric(v), FeatureKind::Numeric) => {
                if (0.0..=1.0).contains(v) {
                    Ok(())
                } else {
                    violation(format!("numeric value {v} outside [0, 1]"))
                }
            }
            (cell, kind) => violation(format!(
                "{} cell given for a {} feature",
                cell.kind_name(),
                kind.as_str()
            )),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Cell::Missing => "missing",
            Cell::Class(_) => "multiclass",
            Cell::Labels(_) => "multilabel",
            Cell::Numeric(_) => "numeric",
        }
    }
}

/// One row of raw (uncoded) data, a cell per schema feature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    pub cells: Vec<Cell>,
}

impl RawRecord {
    pub fn new(cells: Vec<Cell>) -> Self {
        RawRecord { cells }
    }

    pub fn missing(p: usize) -> Self {
        RawRecord {
            cells: vec![Cell::Missing; p],
        }
    }

    pub fn validate(&self, schema: &FeatureSchema) -> Result<(), CodecError> {
        if self.cells.len() != schema.len() {
            return Err(CodecError::RecordWidth {
                expected: schema.len(),
                got: self.cells.len(),
            });
        }
        self.cells
            .iter()
            .zip(schema.features())
            .try_for_each(|(c, f)| c.check(f))
    }

    pub fn observed(&self) -> impl Iterator<Item = bool> + '_ {
        self.cells.iter().map(|c| !c.is_missing())
    }
}

impl From<Vec<Cell>> for RawRecord {
    fn from(cells: Vec<Cell>) -> Self {
        RawRecord { cells }
    }
}
