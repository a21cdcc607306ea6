//! Matrix file formats.
//!
//! CSV: `n` lines of `n` comma-separated fields, each a decimal literal or an
//! integer fraction `p/q`. JSON: `{"n": 3, "entries": [[1, 2, 6], ...]}`.
//! Both run the same validation as [`PcMatrix::new`].

use crate::error::{Error, Result};
use crate::matrix::{MatrixRepr, PcMatrix};

/// Parses one CSV field: a decimal literal or `p/q` with integer `p`, `q`.
pub fn parse_field(field: &str) -> std::result::Result<f64, String> {
    let s = field.trim();
    if s.is_empty() {
        return Err("empty field".into());
    }
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in {s:?}"))?;
            let q: i64 = q
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in {s:?}"))?;
            if q == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(p as f64 / q as f64)
        }
        None => match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(format!("not a finite number: {s:?}")),
        },
    }
}

/// Parses the CSV matrix format.
pub fn parse_csv(text: &str) -> Result<PcMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        let row = record
            .iter()
            .map(|f| parse_field(f).map_err(|msg| Error::Parse { line, msg }))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    PcMatrix::new(rows)
}

/// Parses the JSON matrix format.
pub fn parse_json(text: &str) -> Result<PcMatrix> {
    let raw: MatrixRepr = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    PcMatrix::try_from(raw)
}

/// Picks the format from the first non-blank character: `{` means JSON.
pub fn parse_matrix(text: &str) -> Result<PcMatrix> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}

/// Writes `m` in the CSV format using shortest round-trip decimals.
pub fn to_csv(m: &PcMatrix) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(m: &PcMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization is infallible")
}
