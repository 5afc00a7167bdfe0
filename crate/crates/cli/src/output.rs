//! Tabular output: CSV with a header row, or a JSON mirror.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// Reals in CSV: 15 significant digits, exponent notation, `.` decimal.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.14e}")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row, padding it with empty cells to the header width.
    pub fn push(&mut self, mut row: Vec<Cell>) {
        debug_assert!(row.len() <= self.header.len());
        row.resize(self.header.len(), Cell::Empty);
        self.rows.push(row);
    }

    pub fn check_finite(&self) -> Result<(), CliError> {
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if let Cell::Num(v) = c {
                    if !v.is_finite() {
                        return Err(CliError::NonFinite {
                            column: self.header[i].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match c {
                    Cell::Num(v) => out.push_str(&fmt_real(*v)),
                    Cell::Int(v) => write!(out, "{v}").unwrap(),
                    Cell::Text(t) => out.push_str(t),
                    Cell::Empty => {}
                }
            }
            out.push('\n');
        }
        out
    }
}

/// What a command produced: the table for CSV and a structured value for
/// JSON.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub json: serde_json::Value,
}

impl Report {
    pub fn new<T: Serialize>(table: Table, value: &T) -> Result<Self, CliError> {
        let json = serde_json::to_value(value)
            .map_err(|e| CliError::Usage(format!("cannot serialize output: {e}")))?;
        Ok(Report { table, json })
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        self.table.check_finite()?;
        Ok(match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| CliError::Usage(format!("cannot serialize output: {e}")))?;
                s.push('\n');
                s
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["a", "b", "c"]);
        t.push(vec![1.5.into(), 3usize.into()]);
        t.push(vec!["x".into(), Cell::Empty, (-0.25).into()]);
        assert_eq!(
            t.to_csv(),
            "a,b,c\n1.50000000000000e0,3,\nx,,-2.50000000000000e-1\n"
        );
    }

    #[test]
    fn fifteen_digits() {
        let s = fmt_real(std::f64::consts::PI * 100.0);
        assert_eq!(s, "3.14159265358979e2");
        let back: f64 = s.parse().unwrap();
        assert!((back - std::f64::consts::PI * 100.0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_rejected() {
        let mut t = Table::new(["lambda"]);
        t.push(vec![f64::NAN.into()]);
        let r = Report::new(t, &0).unwrap();
        assert!(matches!(
            r.render(Format::Csv),
            Err(CliError::NonFinite { .. })
        ));
    }
}
