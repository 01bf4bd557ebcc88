//! Parameter-vector and weight-matrix CSV files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use isoprim_core::Error;

use crate::error::CliError;

const PARAMS_HEADER: &str = "index,name,value";

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())).into())
}

fn number(field: &str, line: usize) -> Result<f64, Error> {
    let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad number `{field}`"),
    })?;
    if !v.is_finite() {
        return Err(Error::NonFinite(line));
    }
    Ok(v)
}

pub fn format_params(names: &[String], p: &[f64]) -> String {
    let mut out = format!("{PARAMS_HEADER}\n");
    for (i, (name, v)) in names.iter().zip(p).enumerate() {
        let _ = writeln!(out, "{i},{name},{v}");
    }
    out
}

/// Reads a parameter file; values are taken in row order.
pub fn read_params(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = read(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(PARAMS_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `{PARAMS_HEADER}`"),
        }
        .into());
    }
    let mut p = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: i + 2,
                message: "expected index,name,value".into(),
            }
            .into());
        }
        p.push(number(fields[2], i + 2)?);
    }
    Ok(p)
}

/// Header of parameter names, then one comma-separated row per matrix row.
pub fn format_matrix(names: &[String], w: &DMatrix<f64>) -> String {
    let mut out = names.join(",");
    out.push('\n');
    for row in w.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: &Path, m: usize) -> Result<DMatrix<f64>, CliError> {
    let text = read(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header.split(',').count() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: header.split(',').count(),
        }
        .into());
    }
    let mut values = Vec::with_capacity(m * m);
    let mut rows = 0;
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != m {
            return Err(Error::Parse {
                line: i + 2,
                message: format!("expected {m} values"),
            }
            .into());
        }
        for f in fields {
            values.push(number(f, i + 2)?);
        }
        rows += 1;
    }
    if rows != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: rows,
        }
        .into());
    }
    Ok(DMatrix::from_row_slice(m, m, &values))
}
