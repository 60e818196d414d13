//! Deterministic CSV construction and parsing.
//!
//! Floats are written with `Display`, the shortest form that round-trips,
//! so equal values produce equal bytes on every run and every thread count.

use std::fmt;

use crate::error::{HarnessError, Result};

/// One CSV cell; numeric only, which keeps the long-format merge generic.
#[derive(Clone, Copy, Debug)]
pub enum Cell {
    U64(u64),
    I64(i64),
    F64(f64),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::U64(v) => write!(f, "{v}"),
            Cell::I64(v) => write!(f, "{v}"),
            Cell::F64(v) => write!(f, "{v}"),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U64(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::U64(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::U64(v as u64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::I64(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F64(v)
    }
}

/// Builds a CSV document in memory; the full text is written in one call so
/// partial files never appear on failure.
pub struct CsvBuilder {
    columns: usize,
    buf: String,
}

impl CsvBuilder {
    pub fn new(header: &[&str]) -> Self {
        assert!(!header.is_empty(), "CSV needs at least one column");
        let mut buf = header.join(",");
        buf.push('\n');
        CsvBuilder {
            columns: header.len(),
            buf,
        }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        assert_eq!(cells.len(), self.columns, "CSV row arity mismatch");
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            self.buf.push_str(&cell.to_string());
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// A parsed numeric table: header names plus rows of floats.
#[derive(Clone, Debug)]
pub struct NumericCsv {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Parses a CSV with a header row and all-numeric cells. `label` names the
/// source in diagnostics.
pub fn parse_numeric_csv(label: &str, text: &str) -> Result<NumericCsv> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| HarnessError::Schema {
        path: label.to_string(),
        reason: "empty file, expected a header row".into(),
    })?;
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    if columns.len() < 2 {
        return Err(HarnessError::Schema {
            path: label.to_string(),
            reason: format!("need at least 2 columns, found {}", columns.len()),
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns.len() {
            return Err(HarnessError::Schema {
                path: label.to_string(),
                reason: format!(
                    "row {} has {} cells, header has {} columns",
                    i + 2,
                    cells.len(),
                    columns.len()
                ),
            });
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            cells.iter().map(|c| c.parse::<f64>()).collect();
        rows.push(parsed.map_err(|_| HarnessError::Schema {
            path: label.to_string(),
            reason: format!("row {} has a non-numeric cell", i + 2),
        })?);
    }
    Ok(NumericCsv { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_writes_shortest_roundtrip_floats() {
        let mut csv = CsvBuilder::new(&["n", "value"]);
        csv.row(&[Cell::from(1u64), Cell::from(0.1f64)]);
        csv.row(&[Cell::from(2u64), Cell::from(1.0f64 / 3.0)]);
        let text = csv.finish();
        assert_eq!(text, "n,value\n1,0.1\n2,0.3333333333333333\n");
        let parsed = parse_numeric_csv("t", &text).unwrap();
        assert_eq!(parsed.rows[1][1], 1.0 / 3.0);
    }

    #[test]
    fn ragged_and_non_numeric_rows_are_schema_errors() {
        let ragged = parse_numeric_csv("t", "a,b\n1,2,3\n");
        assert!(matches!(ragged, Err(HarnessError::Schema { .. })));
        let word = parse_numeric_csv("t", "a,b\n1,two\n");
        assert!(matches!(word, Err(HarnessError::Schema { .. })));
        let narrow = parse_numeric_csv("t", "a\n1\n");
        assert!(matches!(narrow, Err(HarnessError::Schema { .. })));
    }
}
