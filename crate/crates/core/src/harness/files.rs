//! JSON matrix and subspace files.
//!
//! ```json
//! { "n": 1, "ordering": "x-then-p", "rows": [[4.0, 0.0], [0.0, 1.0]] }
//! ```
//!
//! Numbers are written with 17 significant digits, which round-trips every
//! finite `f64` exactly.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matcore::{Matrix, Tolerance};
use crate::symplectic::{complex_subspace_from_span, ComplexSubspace};

pub const ORDERING_TAG: &str = "x-then-p";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrixFile {
    n: usize,
    ordering: String,
    rows: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubspaceFile {
    n: usize,
    ordering: String,
    vectors: Vec<Vec<f64>>,
}

/// A `2n × 2n` matrix in `(x₁..xₙ, p₁..pₙ)` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub n: usize,
    pub matrix: Matrix,
}

fn check_ordering(tag: &str) -> Result<()> {
    if tag != ORDERING_TAG {
        return Err(Error::Parse(format!("ordering must be \"{ORDERING_TAG}\", got \"{tag}\"")));
    }
    Ok(())
}

fn check_len(what: &str, len: usize, n: usize) -> Result<()> {
    if len != 2 * n {
        return Err(Error::Parse(format!("{what} has length {len}, expected {} for n = {n}", 2 * n)));
    }
    Ok(())
}

impl MatrixFile {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.rows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "expected an even square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(MatrixFile { n: matrix.rows() / 2, matrix })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawMatrixFile = serde_json::from_str(text)?;
        check_ordering(&raw.ordering)?;
        if raw.n == 0 {
            return Err(Error::Parse("n must be at least 1".into()));
        }
        check_len("rows", raw.rows.len(), raw.n)?;
        for (i, row) in raw.rows.iter().enumerate() {
            check_len(&format!("row {i}"), row.len(), raw.n)?;
        }
        let matrix = Matrix::from_rows(&raw.rows)?;
        Ok(MatrixFile { n: raw.n, matrix })
    }

    pub fn read(path: &Path) -> Result<Self> {
        MatrixFile::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = format!("{{\n  \"n\": {},\n  \"ordering\": \"{ORDERING_TAG}\",\n  \"rows\": [\n", self.n);
        let rows = self.matrix.rows();
        for i in 0..rows {
            out.push_str("    [");
            for (j, x) in self.matrix.row(i).iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                write_float(&mut out, *x);
            }
            out.push_str(if i + 1 < rows { "],\n" } else { "]\n" });
        }
        out.push_str("  ]\n}\n");
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// 17 significant digits in scientific notation; `-0.0` keeps its sign.
pub fn write_float(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").expect("writing to a String cannot fail");
}

/// Spanning vectors of a complex subspace, one `2n`-vector per entry.
pub fn parse_subspace(text: &str, tol: Tolerance) -> Result<ComplexSubspace> {
    let raw: RawSubspaceFile = serde_json::from_str(text)?;
    check_ordering(&raw.ordering)?;
    if raw.n == 0 || raw.vectors.is_empty() {
        return Err(Error::Parse("need n >= 1 and at least one vector".into()));
    }
    for (i, v) in raw.vectors.iter().enumerate() {
        check_len(&format!("vector {i}"), v.len(), raw.n)?;
    }
    // rows of the file are columns of the span matrix
    let span = Matrix::from_rows(&raw.vectors)?.transpose();
    complex_subspace_from_span(&span, tol)
}

pub fn read_subspace(path: &Path, tol: Tolerance) -> Result<ComplexSubspace> {
    parse_subspace(&std::fs::read_to_string(path)?, tol)
}
