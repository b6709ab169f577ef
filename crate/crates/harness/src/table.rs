//! CSV result tables.
//!
//! Output is a `#` comment line carrying the run configuration, then a header row and
//! comma-separated data rows with LF endings. Floats use 17 significant digits.

use std::path::Path;

use crate::error::{write_file, Result};
use crate::plld::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_f64(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(i64::try_from(v).expect("count fits in i64"))
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        // Seeds are printed as unsigned text so they stay exact.
        Cell::Text(v.to_string())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Written after `# `; newlines are replaced by spaces.
    pub comment: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(comment: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            comment: comment.into(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from the header");
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = format!("# {}\n", self.comment.replace(['\n', '\r'], " ")).into_bytes();
        {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row.iter().map(Cell::render))?;
            }
            w.flush().map_err(csv::Error::from)?;
        }
        Ok(out)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.to_bytes()?)
    }
}

/// `key=value` pairs joined by spaces, for table comments.
pub fn describe(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let mut t = Table::new("seed=1 note=a,b", &["n", "err_mean", "tag"]);
        t.push(vec![250usize.into(), 0.5.into(), "x,y".into()]);
        let s = String::from_utf8(t.to_bytes().unwrap()).unwrap();
        assert_eq!(s, "# seed=1 note=a,b\nn,err_mean,tag\n250,5.0000000000000000e-1,\"x,y\"\n");
    }

    #[test]
    fn header_only_when_empty() {
        let t = Table::new("", &["a"]);
        assert_eq!(t.to_bytes().unwrap(), b"# \na\n");
    }
}
