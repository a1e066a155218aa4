//! Result tables, their CSV form, and run comparison.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Float(f) => Some(*f),
            Cell::Text(t) => t.parse().ok(),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            // shortest decimal that round-trips
            Cell::Float(x) => write!(f, "{x}"),
            Cell::Text(t) => f.write_str(t),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
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
        Cell::Text(v.into())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        ResultTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column; non-numeric cells are skipped.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let Some(j) = self.column_index(name) else {
            return Vec::new();
        };
        self.rows.iter().filter_map(|r| r[j].as_f64()).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(ToString::to_string))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?)?;
        Ok(())
    }

    /// Reads a CSV back; every cell comes back as text.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let columns = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(|c| Cell::Text(c.to_string())).collect());
        }
        Ok(ResultTable { columns, rows })
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        ResultTable::from_csv(&std::fs::read_to_string(path)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColumnDiff {
    pub column: String,
    /// Max absolute difference; infinite when text cells disagree.
    pub max_abs_diff: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    pub columns: Vec<ColumnDiff>,
    pub rows: usize,
}

impl CompareReport {
    pub fn max_diff(&self) -> f64 {
        self.columns.iter().map(|c| c.max_abs_diff).fold(0.0, f64::max)
    }

    pub fn within(&self, tolerance: f64) -> bool {
        self.max_diff() <= tolerance
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} rows", self.rows)?;
        for c in &self.columns {
            writeln!(f, "{}\t{}", c.column, c.max_abs_diff)?;
        }
        Ok(())
    }
}

/// Per-column max absolute difference of two tables with the same header
/// and row count.
pub fn compare_tables(a: &ResultTable, b: &ResultTable) -> Result<CompareReport> {
    if a.columns != b.columns {
        return Err(Error::Schema(format!(
            "headers differ: [{}] vs [{}]",
            a.columns.join(","),
            b.columns.join(",")
        )));
    }
    if a.rows.len() != b.rows.len() {
        return Err(Error::Schema(format!("{} rows vs {} rows", a.rows.len(), b.rows.len())));
    }
    let columns = a
        .columns
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let max_abs_diff = a
                .rows
                .iter()
                .zip(&b.rows)
                .map(|(ra, rb)| match (ra[j].as_f64(), rb[j].as_f64()) {
                    (Some(x), Some(y)) if x.is_nan() && y.is_nan() => 0.0,
                    (Some(x), Some(y)) => (x - y).abs(),
                    _ if ra[j].to_string() == rb[j].to_string() => 0.0,
                    _ => f64::INFINITY,
                })
                .fold(0.0, f64::max);
            ColumnDiff {
                column: name.clone(),
                max_abs_diff,
            }
        })
        .collect();
    Ok(CompareReport {
        columns,
        rows: a.rows.len(),
    })
}

pub fn compare_runs(a: &Path, b: &Path) -> Result<CompareReport> {
    compare_tables(&ResultTable::read_csv(a)?, &ResultTable::read_csv(b)?)
}
