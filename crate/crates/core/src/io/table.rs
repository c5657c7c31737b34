use std::io::{Read, Write};
use std::path::Path;

use super::IoError;
use crate::codec::{Cell, FeatureKind, FeatureSchema, FeatureSpec, RawRecord};

/// Separator between the active labels of a multilabel cell. A lone `|`
/// is the empty label set; an empty cell is missing.
pub const LABEL_SEPARATOR: char = '|';

/// Records read from a data file, plus the raw label column if requested.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub records: Vec<RawRecord>,
    pub labels: Option<Vec<String>>,
}

/// A cell that could not be parsed; `row` is the 1-based data row.
#[derive(Clone, Debug, PartialEq)]
pub struct CellParseError {
    pub row: usize,
    pub column: String,
    pub message: String,
}

fn parse_cell(raw: &str, spec: &FeatureSpec) -> Result<Cell, String> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(Cell::Missing);
    }
    let lookup = |l: &str| {
        spec.label_index(l)
            .ok_or_else(|| format!("unknown category `{l}`"))
    };
    match spec.kind {
        FeatureKind::Multiclass => lookup(raw).map(Cell::Class),
        FeatureKind::Multilabel if raw == "|" => Ok(Cell::Labels(Vec::new())),
        FeatureKind::Multilabel => raw
            .split(LABEL_SEPARATOR)
            .map(lookup)
            .collect::<Result<Vec<_>, _>>()
            .map(Cell::labels),
        FeatureKind::Numeric => {
            let v: f64 = raw.parse().map_err(|_| format!("`{raw}` is not a number"))?;
            if (0.0..=1.0).contains(&v) {
                Ok(Cell::Numeric(v))
            } else {
                Err(format!("{v} outside [0, 1]"))
            }
        }
    }
}

fn format_cell(cell: &Cell, spec: &FeatureSpec) -> String {
    match cell {
        Cell::Missing => String::new(),
        Cell::Class(c) => spec.labels[*c].clone(),
        Cell::Labels(l) if l.is_empty() => LABEL_SEPARATOR.to_string(),
        Cell::Labels(l) => l
            .iter()
            .map(|&k| spec.labels[k].as_str())
            .collect::<Vec<_>>()
            .join(&LABEL_SEPARATOR.to_string()),
        Cell::Numeric(v) => format!("{v}"),
    }
}

/// Reads a headed CSV whose columns are the schema features (any order)
/// plus, optionally, `label_column`. Every unparsable cell is reported.
pub fn read_table<R: Read>(reader: R, schema: &FeatureSchema, label_column: Option<&str>) -> Result<Table, IoError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();

    let mut positions = Vec::with_capacity(schema.len());
    let mut missing = Vec::new();
    for spec in schema.features() {
        match header.iter().position(|h| h == &spec.name) {
            Some(i) => positions.push(i),
            None => missing.push(spec.name.clone()),
        }
    }
    let label_pos = match label_column {
        Some(l) => match header.iter().position(|h| h == l) {
            Some(i) => Some(i),
            None => {
                missing.push(l.to_string());
                None
            }
        },
        None => None,
    };
    let unexpected: Vec<String> = header
        .iter()
        .filter(|h| schema.index_of(h).is_none() && Some(h.as_str()) != label_column)
        .cloned()
        .collect();
    if !missing.is_empty() || !unexpected.is_empty() {
        return Err(IoError::Columns { missing, unexpected });
    }

    let mut records = Vec::new();
    let mut labels = label_pos.map(|_| Vec::new());
    let mut errors = Vec::new();
    for (r, row) in rdr.records().enumerate() {
        let row = row?;
        let mut cells = Vec::with_capacity(schema.len());
        for (spec, &pos) in schema.features().iter().zip(&positions) {
            match parse_cell(row.get(pos).unwrap_or(""), spec) {
                Ok(c) => cells.push(c),
                Err(message) => {
                    errors.push(CellParseError {
                        row: r + 1,
                        column: spec.name.clone(),
                        message,
                    });
                    cells.push(Cell::Missing);
                }
            }
        }
        if let (Some(pos), Some(l)) = (label_pos, labels.as_mut()) {
            l.push(row.get(pos).unwrap_or("").trim().to_string());
        }
        records.push(RawRecord::new(cells));
    }
    if !errors.is_empty() {
        return Err(IoError::Cells(errors));
    }
    Ok(Table { records, labels })
}

pub fn read_table_file(path: &Path, schema: &FeatureSchema, label_column: Option<&str>) -> Result<Table, IoError> {
    let f = std::fs::File::open(path).map_err(|e| IoError::file(path, e))?;
    read_table(f, schema, label_column)
}

/// Writes records in schema column order, with an optional trailing label
/// column.
pub fn write_table<W: Write>(
    writer: W,
    schema: &FeatureSchema,
    records: &[RawRecord],
    labels: Option<(&str, &[String])>,
) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = schema.features().iter().map(|f| f.name.as_str()).collect();
    if let Some((name, _)) = labels {
        header.push(name);
    }
    w.write_record(&header)?;
    for (i, rec) in records.iter().enumerate() {
        rec.validate(schema)?;
        let mut row: Vec<String> = rec
            .cells
            .iter()
            .zip(schema.features())
            .map(|(c, s)| format_cell(c, s))
            .collect();
        if let Some((_, l)) = labels {
            row.push(l[i].clone());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| IoError::Io(e.to_string()))?;
    Ok(())
}

/// Maps raw label strings to `{0, 1}`. Without an explicit positive label
/// the second distinct value in sorted order is positive.
pub fn binarize_labels(raw: &[String], positive: Option<&str>) -> Result<(Vec<f64>, String), IoError> {
    let mut distinct: Vec<&str> = raw.iter().map(String::as_str).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.iter().any(|l| l.is_empty()) {
        return Err(IoError::Labels("label column has empty cells".into()));
    }
    if distinct.len() != 2 {
        return Err(IoError::Labels(format!(
            "expected exactly 2 label values, found {}: {distinct:?}",
            distinct.len()
        )));
    }
    let pos = match positive {
        Some(p) if distinct.contains(&p) => p.to_string(),
        Some(p) => return Err(IoError::Labels(format!("positive label `{p}` not present"))),
        None => distinct[1].to_string(),
    };
    Ok((raw.iter().map(|l| f64::from(u8::from(*l == pos))).collect(), pos))
}
