use std::collections::HashSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CodecError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Multiclass,
    Multilabel,
    Numeric,
}

impl FeatureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::Multiclass => "multiclass",
            FeatureKind::Multilabel => "multilabel",
            FeatureKind::Numeric => "numeric",
        }
    }
}

impl std::str::FromStr for FeatureKind {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "multiclass" => Ok(FeatureKind::Multiclass),
            "multilabel" => Ok(FeatureKind::Multilabel),
            "numeric" => Ok(FeatureKind::Numeric),
            other => Err(CodecError::InvalidSchema(format!(
                "unknown feature kind `{other}`"
            ))),
        }
    }
}

/// One categorical (or normalised numeric) feature.
///
/// `labels` maps category indices to the strings used in data files; it always
/// has exactly `cardinality` entries (numeric features carry none).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
    pub cardinality: usize,
    pub labels: Vec<String>,
}

impl FeatureSpec {
    /// A feature whose labels are the category indices `"0"`, `"1"`, ...
    pub fn new(name: impl Into<String>, kind: FeatureKind, cardinality: usize) -> Self {
        let labels = match kind {
            FeatureKind::Numeric => Vec::new(),
            _ => (0..cardinality).map(|k| k.to_string()).collect(),
        };
        FeatureSpec {
            name: name.into(),
            kind,
            cardinality,
            labels,
        }
    }

    pub fn multiclass(name: impl Into<String>, cardinality: usize) -> Self {
        Self::new(name, FeatureKind::Multiclass, cardinality)
    }

    pub fn multilabel(name: impl Into<String>, cardinality: usize) -> Self {
        Self::new(name, FeatureKind::Multilabel, cardinality)
    }

    pub fn numeric(name: impl Into<String>) -> Self {
        Self::new(name, FeatureKind::Numeric, 1)
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        self.labels = labels.into_iter().map(Into::into).collect();
        self
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn validate(&self) -> Result<(), CodecError> {
        let bad = |reason: String| {
            Err(CodecError::InvalidSchema(format!(
                "feature `{}`: {reason}",
                self.name
            )))
        };
        if self.name.is_empty() {
            return Err(CodecError::InvalidSchema("empty feature name".into()));
        }
        match self.kind {
            FeatureKind::Multiclass if self.cardinality < 2 => {
                return bad(format!(
                    "multiclass needs at least 2 categories, got {}",
                    self.cardinality
                ))
            }
            FeatureKind::Multilabel if self.cardinality < 1 => {
                return bad("multilabel needs at least 1 category".into())
            }
            FeatureKind::Numeric if self.cardinality != 1 => {
                return bad(format!(
                    "numeric features have cardinality 1, got {}",
                    self.cardinality
                ))
            }
            _ => {}
        }
        if self.kind != FeatureKind::Numeric {
            if self.labels.len() != self.cardinality {
                return bad(format!(
                    "{} labels for {} categories",
                    self.labels.len(),
                    self.cardinality
                ));
            }
            let unique: HashSet<_> = self.labels.iter().collect();
            if unique.len() != self.labels.len() {
                return bad("duplicate category labels".into());
            }
            if self.labels.iter().any(|l| l.is_empty() || l.contains('|')) {
                return bad("category labels must be non-empty and must not contain `|`".into());
            }
        }
        Ok(())
    }
}

/// Ordered feature list; fixes the block layout of every coded vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<FeatureSpec>", into = "Vec<FeatureSpec>")]
pub struct FeatureSchema {
    features: Vec<FeatureSpec>,
    offsets: Vec<usize>,
    width: usize,
}

impl FeatureSchema {
    pub fn new(features: Vec<FeatureSpec>) -> Result<Self, CodecError> {
        if features.is_empty() {
            return Err(CodecError::InvalidSchema("schema has no features".into()));
        }
        let mut seen = HashSet::new();
        for f in &features {
            f.validate()?;
            if !seen.insert(f.name.as_str()) {
                return Err(CodecError::InvalidSchema(format!(
                    "duplicate feature name `{}`",
                    f.name
                )));
            }
        }
        let mut offsets = Vec::with_capacity(features.len());
        let mut width = 0;
        for f in &features {
            offsets.push(width);
            width += f.cardinality;
        }
        Ok(FeatureSchema {
            features,
            offsets,
            width,
        })
    }

    /// Number of features `p`.
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Coded width `Q`.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn feature(&self, j: usize) -> &FeatureSpec {
        &self.features[j]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Column range of feature `j`'s block.
    pub fn block(&self, j: usize) -> Range<usize> {
        self.offsets[j]..self.offsets[j] + self.features[j].cardinality
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&FeatureSpec, Range<usize>)> {
        self.features
            .iter()
            .enumerate()
            .map(move |(j, f)| (f, self.block(j)))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    /// Feature index owning coded column `col`.
    pub fn feature_of_column(&self, col: usize) -> usize {
        match self.offsets.binary_search(&col) {
            Ok(j) => j,
            Err(j) => j - 1,
        }
    }

    /// SHA-256 over the canonical schema text (names, kinds, cardinalities,
    /// labels, in order).
    pub fn hash(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        for f in &self.features {
            h.update(f.name.as_bytes());
            h.update([0]);
            h.update(f.kind.as_str().as_bytes());
            h.update([0]);
            h.update((f.cardinality as u64).to_le_bytes());
            for l in &f.labels {
                h.update(l.as_bytes());
                h.update([0]);
            }
            h.update([0xff]);
        }
        let mut out = [0u8; 32];
        out.copy_from_slice(&h.finalize());
        out
    }

    pub fn hash_hex(&self) -> String {
        self.hash().iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl TryFrom<Vec<FeatureSpec>> for FeatureSchema {
    type Error = CodecError;

    fn try_from(v: Vec<FeatureSpec>) -> Result<Self, Self::Error> {
        FeatureSchema::new(v)
    }
}

impl From<FeatureSchema> for Vec<FeatureSpec> {
    fn from(s: FeatureSchema) -> Self {
        s.features
    }
}
