//! Deterministic CSV and JSON emission.
//!
//! CSV files carry one header row, print floats with 12 significant digits
//! in scientific notation with `.` as the decimal separator, and terminate
//! every row (including the last) with `\n`. Identical configurations
//! produce byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),
}

/// A float formatted with 12 significant digits.
pub fn format_value(value: f64) -> String {
    format!("{value:.11e}")
}

/// One CSV cell: floats via [`format_value`], signs as bare integers.
pub enum Cell {
    Float(f64),
    Int(i64),
}

impl From<f64> for Cell {
    fn from(value: f64) -> Self {
        Cell::Float(value)
    }
}

impl From<i64> for Cell {
    fn from(value: i64) -> Self {
        Cell::Int(value)
    }
}

pub struct CsvWriter {
    writer: BufWriter<File>,
    path: PathBuf,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self, OutputError> {
        let file = File::create(path)
            .map_err(|source| OutputError::Io { path: path.to_path_buf(), source })?;
        let mut writer = BufWriter::new(file);
        writeln!(writer, "{}", header.join(","))
            .map_err(|source| OutputError::Io { path: path.to_path_buf(), source })?;
        Ok(Self { writer, path: path.to_path_buf() })
    }

    pub fn row(&mut self, cells: &[Cell]) -> Result<(), OutputError> {
        let rendered: Vec<String> = cells
            .iter()
            .map(|cell| match cell {
                Cell::Float(x) => format_value(*x),
                Cell::Int(n) => n.to_string(),
            })
            .collect();
        writeln!(self.writer, "{}", rendered.join(","))
            .map_err(|source| OutputError::Io { path: self.path.clone(), source })
    }

    pub fn finish(mut self) -> Result<(), OutputError> {
        self.writer
            .flush()
            .map_err(|source| OutputError::Io { path: self.path.clone(), source })
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, report: &T) -> Result<(), OutputError> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| OutputError::Io { path: path.to_path_buf(), source })
}
