//! libsvm / svmlight text format: `<label> <idx>:<val> ...`, 1-based
//! strictly increasing indices, `#` starts a comment.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::datagen::{Dataset, Storage};
use crate::error::{Error, Result};
use crate::vector::{Features, Sample, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelMode {
    /// `label > 0 ↦ +1`, otherwise `−1`.
    #[default]
    Binary,
    /// Keep the label as written.
    Raw,
}

pub fn read_libsvm(path: impl AsRef<Path>) -> Result<Dataset> {
    read_libsvm_with(path, LabelMode::Binary)
}

pub fn read_libsvm_with(path: impl AsRef<Path>, labels: LabelMode) -> Result<Dataset> {
    let file = File::open(path)?;
    parse_libsvm(BufReader::new(file), labels)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_libsvm<R: BufRead>(reader: R, labels: LabelMode) -> Result<Dataset> {
    let mut rows: Vec<(f64, SparseVec)> = Vec::new();
    let mut dim = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let label_tok = tokens
            .next()
            .ok_or_else(|| parse_err(lineno, "missing label"))?;
        let raw: f64 = label_tok
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad label `{label_tok}`")))?;
        if !raw.is_finite() {
            return Err(parse_err(lineno, "non-finite label"));
        }
        let y = match labels {
            LabelMode::Binary => {
                if raw > 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            LabelMode::Raw => raw,
        };
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| parse_err(lineno, format!("expected <idx>:<val>, got `{tok}`")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad index `{idx}`")))?;
            if idx == 0 {
                return Err(parse_err(lineno, "indices are 1-based"));
            }
            let val: f64 = val
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad value `{val}`")))?;
            if !val.is_finite() {
                return Err(parse_err(
                    lineno,
                    format!("non-finite value at index {idx}"),
                ));
            }
            if indices.last().is_some_and(|&last| idx - 1 <= last) {
                return Err(parse_err(lineno, "indices must be strictly increasing"));
            }
            indices.push(idx - 1);
            values.push(val);
        }
        dim = dim.max(indices.last().map_or(0, |&l| l + 1));
        let sv = SparseVec::new(usize::MAX, indices, values)
            .map_err(|e| parse_err(lineno, e.to_string()))?;
        rows.push((y, sv));
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let dim = dim.max(1);
    let samples = rows
        .into_iter()
        .map(|(y, mut sv)| {
            sv.set_dim(dim);
            Sample {
                x: Features::Sparse(sv),
                y,
            }
        })
        .collect();
    Dataset::new(samples, dim, Storage::Sparse)
}

/// Writes `data` in libsvm format; zero entries of dense rows are omitted.
pub fn write_libsvm<W: Write>(data: &Dataset, mut out: W) -> Result<()> {
    for s in &data.samples {
        write!(out, "{}", s.y)?;
        match &s.x {
            Features::Sparse(sv) => {
                for (i, v) in sv.indices().iter().zip(sv.values()) {
                    write!(out, " {}:{}", i + 1, v)?;
                }
            }
            Features::Dense(v) => {
                for (i, v) in v.iter().enumerate().filter(|(_, v)| **v != 0.0) {
                    write!(out, " {}:{}", i + 1, v)?;
                }
            }
        }
        writeln!(out)?;
    }
    Ok(())
}
