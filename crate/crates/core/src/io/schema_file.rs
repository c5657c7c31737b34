use std::path::Path;

use super::IoError;
use crate::codec::{FeatureKind, FeatureSchema, FeatureSpec};

/// Parses the whitespace-separated schema format:
///
/// ```text
/// # comment
/// name  kind  cardinality  [label,label,...]
/// ```
///
/// Without a label list the categories are named `0`, `1`, ...
pub fn parse_schema(text: &str) -> Result<FeatureSchema, IoError> {
    let mut features = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| IoError::SchemaLine { line: no + 1, message: msg };
        let parts: Vec<&str> = line.split_whitespace().collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad(format!("expected 3 or 4 fields, found {}", parts.len())));
        }
        let kind: FeatureKind = parts[1].parse().map_err(|e: crate::codec::CodecError| bad(e.to_string()))?;
        let cardinality: usize = parts[2]
            .parse()
            .map_err(|_| bad(format!("cardinality `{}` is not a number", parts[2])))?;
        let mut spec = FeatureSpec::new(parts[0], kind, cardinality);
        if let Some(labels) = parts.get(3) {
            spec.labels = labels.split(',').map(str::to_string).collect();
        }
        spec.validate().map_err(|e| bad(e.to_string()))?;
        features.push(spec);
    }
    Ok(FeatureSchema::new(features)?)
}

pub fn read_schema(path: &Path) -> Result<FeatureSchema, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    parse_schema(&text)
}

/// Inverse of [`parse_schema`]. Labels containing whitespace, `,` or `#`
/// cannot be written.
pub fn format_schema(schema: &FeatureSchema) -> Result<String, IoError> {
    let mut out = String::from("# name kind cardinality labels\n");
    for spec in schema.features() {
        let unsafe_label = spec
            .labels
            .iter()
            .chain(std::iter::once(&spec.name))
            .find(|l| l.is_empty() || l.contains(|c: char| c.is_whitespace() || c == ',' || c == '#'));
        if let Some(l) = unsafe_label {
            return Err(IoError::Unrepresentable(format!("`{l}` in feature `{}`", spec.name)));
        }
        out.push_str(&format!("{} {} {}", spec.name, spec.kind.as_str(), spec.cardinality));
        if !spec.labels.is_empty() {
            out.push(' ');
            out.push_str(&spec.labels.join(","));
        }
        out.push('\n');
    }
    Ok(out)
}
