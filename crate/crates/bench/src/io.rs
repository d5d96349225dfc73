//! Sparse operators as coordinate triplet files.
//!
//! The format is MatrixMarket coordinate: lines starting with `%` are
//! comments, the first data line is `m n nnz`, and each of the following
//! `nnz` lines is a 1-based `row col value` entry. Duplicate entries are
//! summed.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use randproj_core::linop::{CsrOperator, LinearOperator};

use crate::{BenchError, Result};

const BANNER: &str = "%%MatrixMarket matrix coordinate real general";

fn parse_error(line: usize, message: impl Into<String>) -> BenchError {
    BenchError::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(token: Option<&str>, line: usize, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| parse_error(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| parse_error(line, format!("invalid {what} {token:?}")))
}

pub fn read_triplets<R: BufRead>(reader: R) -> Result<CsrOperator> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut entries = Vec::new();
    let mut last_line = 0;
    for (index, line) in reader.lines().enumerate() {
        let number = index + 1;
        last_line = number;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        let mut tokens = text.split_whitespace();
        match header {
            None => {
                let rows = field(tokens.next(), number, "row count")?;
                let cols = field(tokens.next(), number, "column count")?;
                let nnz = field(tokens.next(), number, "entry count")?;
                header = Some((rows, cols, nnz));
                entries.reserve(nnz);
            }
            Some((rows, cols, nnz)) => {
                if entries.len() == nnz {
                    return Err(parse_error(number, format!("more than the declared {nnz} entries")));
                }
                let i: usize = field(tokens.next(), number, "row index")?;
                let j: usize = field(tokens.next(), number, "column index")?;
                let v: f64 = field(tokens.next(), number, "value")?;
                if !(1..=rows).contains(&i) || !(1..=cols).contains(&j) {
                    return Err(parse_error(number, format!("entry ({i}, {j}) outside {rows}x{cols}")));
                }
                if !v.is_finite() {
                    return Err(parse_error(number, "non-finite value"));
                }
                entries.push((i - 1, j - 1, v));
            }
        }
        if tokens.next().is_some() {
            return Err(parse_error(number, "unexpected trailing field"));
        }
    }
    let (rows, cols, nnz) = header.ok_or_else(|| parse_error(last_line, "missing header"))?;
    if entries.len() != nnz {
        return Err(parse_error(
            last_line,
            format!("declared {nnz} entries, found {}", entries.len()),
        ));
    }
    Ok(CsrOperator::from_triplets(rows, cols, &entries)?)
}

pub fn write_triplets<W: Write>(mut writer: W, op: &CsrOperator) -> Result<()> {
    writeln!(writer, "{BANNER}")?;
    writeln!(writer, "{} {} {}", op.rows(), op.cols(), op.nnz())?;
    for (i, j, v) in op.triplets() {
        writeln!(writer, "{} {} {v:e}", i + 1, j + 1)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn load_triplet_file(path: impl AsRef<Path>) -> Result<CsrOperator> {
    read_triplets(BufReader::new(File::open(path)?))
}

pub fn save_triplet_file(path: impl AsRef<Path>, op: &CsrOperator) -> Result<()> {
    write_triplets(BufWriter::new(File::create(path)?), op)
}
