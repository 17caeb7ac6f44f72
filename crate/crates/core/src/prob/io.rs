//! Ingestion of channels and distributions from CSV or JSON text.
//!
//! CSV: one row of comma-separated decimals per line, `#` starts a comment.
//! JSON: `{"rows": [[...], ...]}`; a distribution may also be a bare array
//! or `{"probs": [...]}`. Decimal parsing uses Rust's correctly rounded
//! `f64` parser and never depends on locale.

use serde::Deserialize;

use super::{Channel, Distribution};
use crate::error::{LeakageError, Result};

fn is_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('{') | Some('['))
}

fn parse_csv_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| LeakageError::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            column: 0,
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                field.parse::<f64>().map_err(|_| LeakageError::Parse {
                    line,
                    column: c + 1,
                    message: format!("not a decimal number: {field:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn json_error(e: serde_json::Error) -> LeakageError {
    LeakageError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_channel(text: &str) -> Result<Channel> {
    if is_json(text) {
        #[derive(Deserialize)]
        struct Rows {
            rows: Vec<Vec<f64>>,
        }
        let raw: Rows = serde_json::from_str(text).map_err(json_error)?;
        Channel::from_rows(raw.rows)
    } else {
        Channel::from_rows(parse_csv_rows(text)?)
    }
}

/// Accepts a single row, a single column, or any of the JSON shapes above.
pub fn parse_distribution(text: &str) -> Result<Distribution> {
    let rows = if is_json(text) {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Shape {
            Bare(Vec<f64>),
            Probs { probs: Vec<f64> },
            Rows { rows: Vec<Vec<f64>> },
        }
        match serde_json::from_str::<Shape>(text).map_err(json_error)? {
            Shape::Bare(v) | Shape::Probs { probs: v } => vec![v],
            Shape::Rows { rows } => rows,
        }
    } else {
        parse_csv_rows(text)?
    };
    let flat = match rows.as_slice() {
        [single] => single.clone(),
        many if many.iter().all(|r| r.len() == 1) => many.iter().map(|r| r[0]).collect(),
        _ => {
            return Err(LeakageError::InvalidArgument(
                "a distribution must be a single row or a single column".into(),
            ))
        }
    };
    Distribution::new(flat)
}
