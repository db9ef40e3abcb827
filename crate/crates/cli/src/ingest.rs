//! CSV ingestion and block-maxima extraction.
//!
//! Parsing keeps the file order: blocking windows are consecutive rows of
//! the raw series. The resulting [`DataSample`] sorts internally afterwards.

use gevfit_core::{DataSample, Error, Result};

/// Block-maxima extraction settings: window length and whether a trailing
/// partial window is dropped (the default) or kept.
#[derive(Debug, Clone, Copy)]
pub struct BlockSpec {
    pub block_size: usize,
    pub drop_partial: bool,
}

impl Default for BlockSpec {
    fn default() -> Self {
        Self {
            block_size: 1,
            drop_partial: true,
        }
    }
}

/// Selects a CSV column by header name or zero-based index.
#[derive(Debug, Clone)]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

impl ColumnSelector {
    pub fn parse(raw: &str) -> Self {
        match raw.parse::<usize>() {
            Ok(i) => Self::Index(i),
            Err(_) => Self::Name(raw.to_string()),
        }
    }
}

/// Parses one numeric column out of CSV text, in file order. The first line
/// is the header. Errors carry the offending line number.
pub fn parse_csv_column(text: &str, column: &ColumnSelector) -> Result<Vec<f64>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::DegenerateData("empty input".into()))?;
    let headers: Vec<&str> = header.split(',').map(str::trim).collect();
    let idx = match column {
        ColumnSelector::Index(i) => {
            if *i >= headers.len() {
                return Err(Error::Domain(format!(
                    "column index {i} out of range; header has {} fields",
                    headers.len()
                )));
            }
            *i
        }
        ColumnSelector::Name(name) => headers.iter().position(|h| h == name).ok_or_else(|| {
            Error::Domain(format!("column '{name}' not found in header {headers:?}"))
        })?,
    };
    let mut values = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let field =
            line.split(',').nth(idx).map(str::trim).ok_or_else(|| {
                Error::Domain(format!("line {}: missing column {idx}", lineno + 1))
            })?;
        let value: f64 = field.parse().map_err(|_| {
            Error::Domain(format!(
                "line {}: cannot parse '{field}' as a number",
                lineno + 1
            ))
        })?;
        if !value.is_finite() {
            return Err(Error::Domain(format!(
                "line {}: non-finite value {value}",
                lineno + 1
            )));
        }
        values.push(value);
    }
    Ok(values)
}

/// Maxima of consecutive non-overlapping windows of the raw series, in file
/// order. A trailing partial window is dropped unless explicitly kept.
pub fn block_maxima(raw: &[f64], spec: &BlockSpec) -> Result<Vec<f64>> {
    if spec.block_size == 0 {
        return Err(Error::Domain("block size must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(raw.len() / spec.block_size + 1);
    for chunk in raw.chunks(spec.block_size) {
        if chunk.len() < spec.block_size && spec.drop_partial {
            break;
        }
        out.push(chunk.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    }
    if out.len() < 2 {
        return Err(Error::DegenerateData(format!(
            "blocking left {} maxima; need at least 2",
            out.len()
        )));
    }
    Ok(out)
}

/// Full ingestion path: parse, optionally block, build the sample.
pub fn ingest(text: &str, column: &ColumnSelector, spec: &BlockSpec) -> Result<DataSample> {
    let raw = parse_csv_column(text, column)?;
    let values = if spec.block_size > 1 {
        block_maxima(&raw, spec)?
    } else {
        raw
    };
    DataSample::new(values)
}
