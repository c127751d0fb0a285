//! Plain-text task files.
//!
//! Utility file: a header line `<num_worlds> <num_actions>`, then one row of
//! `num_actions` reals per world, then optionally one row of `num_worlds`
//! reals giving the prior (uniform when absent). Blank lines and lines
//! starting with `#` are ignored.
//!
//! Mug template: 12 lines of 16 `0`/`1` characters.

use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

use super::mug::{MUG_HEIGHT, MUG_WIDTH};
use super::{uniform, Encoder, WorldModel};

#[derive(Clone, Debug, PartialEq)]
pub struct UtilityFile<T> {
    pub utility: Matrix<T>,
    pub prior: Vec<T>,
}

impl<T: Scalar> UtilityFile<T> {
    /// Task with this table, its prior and the smallest binary encoder.
    pub fn into_world_model(self) -> Result<WorldModel<T>> {
        let enc = Encoder::binary_for(self.utility.rows());
        WorldModel::new(self.prior, self.utility, enc)
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_row<T: Scalar>(line_no: usize, line: &str, expected: usize) -> Result<Vec<T>> {
    let row = line
        .split_whitespace()
        .map(|tok| {
            f64::from_str(tok)
                .map(T::of)
                .map_err(|e| Error::Parse { line: line_no, reason: format!("{tok:?}: {e}") })
        })
        .collect::<Result<Vec<T>>>()?;
    if row.len() != expected {
        return Err(Error::Parse {
            line: line_no,
            reason: format!("expected {expected} values, found {}", row.len()),
        });
    }
    Ok(row)
}

pub fn parse_utility_table<T: Scalar>(text: &str) -> Result<UtilityFile<T>> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, reason: "empty file".into() })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse { line: hline, reason: format!("header: {e}") })?;
    let [nw, na] = dims[..] else {
        return Err(Error::Parse { line: hline, reason: "header must be `<worlds> <actions>`".into() });
    };
    if nw == 0 || na == 0 {
        return Err(Error::Parse { line: hline, reason: "dimensions must be positive".into() });
    }
    let mut rows = Vec::with_capacity(nw);
    for _ in 0..nw {
        let (n, l) = lines
            .next()
            .ok_or(Error::Parse { line: hline, reason: format!("expected {nw} utility rows") })?;
        rows.push(parse_row(n, l, na)?);
    }
    let prior = match lines.next() {
        Some((n, l)) => parse_row(n, l, nw)?,
        None => uniform(nw),
    };
    if let Some((n, _)) = lines.next() {
        return Err(Error::Parse { line: n, reason: "trailing content".into() });
    }
    Ok(UtilityFile { utility: Matrix::from_rows(&rows), prior })
}

pub fn load_utility_file<T: Scalar>(path: impl AsRef<Path>) -> Result<UtilityFile<T>> {
    parse_utility_table(&std::fs::read_to_string(path)?)
}

pub fn parse_mug_template<T: Scalar>(text: &str) -> Result<Vec<T>> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    if lines.len() != MUG_HEIGHT {
        return Err(Error::Parse {
            line: lines.last().map_or(1, |l| l.0),
            reason: format!("expected {MUG_HEIGHT} rows, found {}", lines.len()),
        });
    }
    let mut px = Vec::with_capacity(MUG_WIDTH * MUG_HEIGHT);
    for (n, l) in lines {
        if l.chars().count() != MUG_WIDTH {
            return Err(Error::Parse { line: n, reason: format!("expected {MUG_WIDTH} columns") });
        }
        for ch in l.chars() {
            px.push(match ch {
                '0' => T::zero(),
                '1' => T::one(),
                other => return Err(Error::Parse { line: n, reason: format!("unexpected {other:?}") }),
            });
        }
    }
    Ok(px)
}

pub fn load_mug_template<T: Scalar>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    parse_mug_template(&std::fs::read_to_string(path)?)
}
