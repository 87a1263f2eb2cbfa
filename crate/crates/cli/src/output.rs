//! Deterministic artifact writers.
//!
//! CSV uses '.' decimals, 17 significant digits, LF line endings, and a
//! mandatory header row; footer metadata travels in '#' comment lines.
//! JSON artifacts are pretty-printed structs whose first field is the
//! producing configuration. Neither format carries timings or timestamps,
//! so repeated runs are byte-identical.

use std::fmt::Write as _;

use serde::Serialize;

use crate::Failure;

/// Fixed numeric format of every CSV cell: full f64 round-trip precision.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV accumulator with the format contract baked in.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(columns: &[&str]) -> Csv {
        let mut text = String::new();
        let _ = writeln!(text, "{}", columns.join(","));
        Csv { text }
    }

    /// A '#' comment line above or below the data block.
    pub fn comment(&mut self, line: &str) {
        let _ = writeln!(self.text, "# {line}");
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    /// A row with a trailing non-numeric status cell.
    pub fn row_with_status(&mut self, values: &[f64], status: &str) {
        let mut cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
        cells.push(status.to_string());
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn write(&self, path: &str) -> Result<(), Failure> {
        write_text(path, &self.text)
    }
}

pub fn write_text(path: &str, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Config(format!("cannot write {path}: {e}")))
}

pub fn write_json<T: Serialize>(path: &str, artifact: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(artifact)
        .map_err(|e| Failure::Config(format!("cannot serialize {path}: {e}")))?;
    text.push('\n');
    write_text(path, &text)
}
