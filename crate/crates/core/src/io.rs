//! File formats: CSV and raw little-endian f64 matrices, label files.
//!
//! CSV carries no header, one point per line, comma-delimited. The raw
//! format stores row-major little-endian f64 payload in `<path>` plus a
//! sidecar `<path>.meta` holding `N dim` on one line; it round-trips
//! bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{LabelVector, PointMatrix};

/// On-disk matrix encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    RawF64,
}

impl FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(MatrixFormat::Csv),
            "raw-f64" | "raw" => Ok(MatrixFormat::RawF64),
            other => Err(Error::Config(format!(
                "unknown matrix format {other:?} (expected csv or raw-f64)"
            ))),
        }
    }
}

/// Load a point matrix from disk.
pub fn load_matrix(path: &Path, format: MatrixFormat) -> Result<PointMatrix> {
    match format {
        MatrixFormat::Csv => load_csv(path),
        MatrixFormat::RawF64 => load_raw(path),
    }
}

/// Write a point matrix to disk.
pub fn save_matrix(m: &PointMatrix, path: &Path, format: MatrixFormat) -> Result<()> {
    match format {
        MatrixFormat::Csv => save_csv(m, path),
        MatrixFormat::RawF64 => save_raw(m, path),
    }
}

fn load_csv(path: &Path) -> Result<PointMatrix> {
    let text = fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let field = field.trim();
            let v: f64 = field.parse().map_err(|_| {
                Error::Format(format!("line {}: cannot parse {field:?}", lineno + 1))
            })?;
            if !v.is_finite() {
                return Err(Error::Value(format!(
                    "line {}: non-finite value {field:?}",
                    lineno + 1
                )));
            }
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Format(format!(
                    "line {}: {} columns, expected {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    PointMatrix::from_rows(&rows)
}

fn save_csv(m: &PointMatrix, path: &Path) -> Result<()> {
    let mut out = String::new();
    for i in 0..m.n_points() {
        let row = m.row(i);
        for (c, v) in row.iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            // Shortest round-trip decimal form; re-parsing restores the bits.
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

fn meta_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    std::path::PathBuf::from(s)
}

fn load_raw(path: &Path) -> Result<PointMatrix> {
    let meta = fs::read_to_string(meta_path(path))?;
    let mut it = meta.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Format("meta file: missing point count".into()))?;
    let dim: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Format("meta file: missing dimension".into()))?;
    let bytes = fs::read(path)?;
    if bytes.len() != n * dim * 8 {
        return Err(Error::Format(format!(
            "raw payload is {} bytes, expected {}",
            bytes.len(),
            n * dim * 8
        )));
    }
    let mut data = Vec::with_capacity(n * dim);
    for chunk in bytes.chunks_exact(8) {
        let v = f64::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(Error::Value(format!(
                "non-finite value at element {}",
                data.len()
            )));
        }
        data.push(v);
    }
    PointMatrix::from_vec(data, n, dim)
}

fn save_raw(m: &PointMatrix, path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(m.as_slice().len() * 8);
    for v in m.as_slice() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    fs::write(meta_path(path), format!("{} {}\n", m.n_points(), m.dim()))?;
    Ok(())
}

/// Load class labels from a single-column CSV of non-negative integers.
pub fn load_labels(path: &Path) -> Result<LabelVector> {
    let text = fs::read_to_string(path)?;
    let mut labels = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: u32 = t.parse().map_err(|_| {
            Error::Value(format!(
                "line {}: label {t:?} is not a non-negative integer",
                lineno + 1
            ))
        })?;
        labels.push(v);
    }
    LabelVector::new(labels)
}
