//! In-memory tabular dataset: named, typed columns over row-major cells.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kind of a column: every non-missing cell is a number, or every
/// non-missing cell is text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

/// One table cell. Exactly one variant is ever active.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
    Missing,
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }
}

/// Tabular dataset. Immutable once built; all transformations return a new
/// frame, so sharing across threads is safe.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    column_names: Vec<String>,
    column_kinds: Vec<ColumnKind>,
    cells: Vec<Cell>, // row-major, n_rows * n_cols
    n_rows: usize,
    n_cols: usize,
}

impl Frame {
    /// Builds a frame from rows, checking the column contracts: unique
    /// names, rectangular rows, and cell types consistent with each
    /// column's kind.
    pub fn new(
        column_names: Vec<String>,
        column_kinds: Vec<ColumnKind>,
        rows: Vec<Vec<Cell>>,
    ) -> Result<Self> {
        if column_names.len() != column_kinds.len() {
            return Err(Error::Schema(format!(
                "{} column names but {} kinds",
                column_names.len(),
                column_kinds.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &column_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::Schema(format!("duplicate column name {name:?}")));
            }
        }
        let n_cols = column_names.len();
        let mut cells = Vec::with_capacity(rows.len() * n_cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::Schema(format!(
                    "row {} has {} cells, expected {}",
                    i + 1,
                    row.len(),
                    n_cols
                )));
            }
            for (j, cell) in row.iter().enumerate() {
                let ok = matches!(
                    (column_kinds[j], cell),
                    (_, Cell::Missing)
                        | (ColumnKind::Numeric, Cell::Number(_))
                        | (ColumnKind::Categorical, Cell::Text(_))
                );
                if !ok {
                    return Err(Error::Schema(format!(
                        "cell ({}, {}) does not match column kind {:?}",
                        i + 1,
                        column_names[j],
                        column_kinds[j]
                    )));
                }
            }
        }
        let n_rows = rows.len();
        for row in rows {
            cells.extend(row);
        }
        Ok(Self {
            column_names,
            column_kinds,
            cells,
            n_rows,
            n_cols,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn column_kinds(&self) -> &[ColumnKind] {
        &self.column_kinds
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|n| n == name)
    }

    pub fn cell(&self, row: usize, col: usize) -> &Cell {
        &self.cells[row * self.n_cols + col]
    }

    pub fn row(&self, row: usize) -> &[Cell] {
        &self.cells[row * self.n_cols..(row + 1) * self.n_cols]
    }

    /// Iterator over a single column's cells, top to bottom.
    pub fn column(&self, col: usize) -> impl Iterator<Item = &Cell> + '_ {
        (0..self.n_rows).map(move |r| self.cell(r, col))
    }

    /// Fraction of missing cells in a column.
    pub fn missing_fraction(&self, col: usize) -> f64 {
        if self.n_rows == 0 {
            return 0.0;
        }
        let missing = self.column(col).filter(|c| c.is_missing()).count();
        missing as f64 / self.n_rows as f64
    }

    /// New frame keeping the columns at `keep` (in the given order).
    pub fn select_columns(&self, keep: &[usize]) -> Result<Self> {
        let names = keep
            .iter()
            .map(|&j| self.column_names[j].clone())
            .collect();
        let kinds = keep.iter().map(|&j| self.column_kinds[j]).collect();
        let rows = (0..self.n_rows)
            .map(|r| keep.iter().map(|&j| self.cell(r, j).clone()).collect())
            .collect();
        Self::new(names, kinds, rows)
    }

    /// New frame keeping the rows at `keep` (in the given order).
    pub fn select_rows(&self, keep: &[usize]) -> Result<Self> {
        let rows = keep.iter().map(|&r| self.row(r).to_vec()).collect();
        Self::new(
            self.column_names.clone(),
            self.column_kinds.clone(),
            rows,
        )
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Cell]> + '_ {
        (0..self.n_rows).map(move |r| self.row(r))
    }
}

/// Missing-value markers recognized on input: the empty string and the
/// literal `NA`. Anything else is a value.
fn is_missing_marker(field: &str) -> bool {
    field.is_empty() || field == "NA"
}

/// Reads an RFC-4180-style CSV (comma delimiter, first row header, UTF-8)
/// into a [`Frame`].
///
/// Columns default to numeric when every non-missing cell parses as a
/// number, otherwise categorical. `schema_hint` overrides the kind of the
/// named columns; a column hinted numeric that contains a non-numeric
/// value is a parse error.
pub fn read_csv(path: &Path, schema_hint: &[(String, ColumnKind)]) -> Result<Frame> {
    let file = std::fs::File::open(path).map_err(|e| {
        Error::Config(format!("cannot open input {}: {e}", path.display()))
    })?;
    read_csv_from(file, schema_hint)
}

/// Same as [`read_csv`] but over any reader; used by tests and by callers
/// holding in-memory data.
pub fn read_csv_from<R: std::io::Read>(
    reader: R,
    schema_hint: &[(String, ColumnKind)],
) -> Result<Frame> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);

    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse {
            row: 1,
            message: format!("cannot read header: {e}"),
        })?
        .iter()
        .map(str::to_owned)
        .collect();
    if headers.is_empty() {
        return Err(Error::Schema("empty header row".into()));
    }
    let mut seen = HashSet::new();
    for h in &headers {
        if !seen.insert(h.as_str()) {
            return Err(Error::Schema(format!("duplicate header {h:?}")));
        }
    }
    let n_cols = headers.len();

    let mut raw_rows: Vec<Vec<String>> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row_no = i + 2; // 1-based, header is row 1
        let record = record.map_err(|e| Error::Parse {
            row: row_no,
            message: e.to_string(),
        })?;
        if record.len() != n_cols {
            return Err(Error::Parse {
                row: row_no,
                message: format!("row has {} fields, expected {}", record.len(), n_cols),
            });
        }
        raw_rows.push(record.iter().map(str::to_owned).collect());
    }

    // Infer kinds: numeric unless some non-missing cell fails to parse.
    let mut kinds: Vec<ColumnKind> = (0..n_cols)
        .map(|j| {
            let numeric = raw_rows.iter().all(|row| {
                is_missing_marker(&row[j]) || row[j].trim().parse::<f64>().is_ok()
            });
            if numeric {
                ColumnKind::Numeric
            } else {
                ColumnKind::Categorical
            }
        })
        .collect();
    for (name, kind) in schema_hint {
        match headers.iter().position(|h| h == name) {
            Some(j) => kinds[j] = *kind,
            None => {
                return Err(Error::Config(format!(
                    "schema hint names unknown column {name:?}"
                )))
            }
        }
    }

    let mut rows: Vec<Vec<Cell>> = Vec::with_capacity(raw_rows.len());
    for (i, raw) in raw_rows.iter().enumerate() {
        let row_no = i + 2;
        let mut row = Vec::with_capacity(n_cols);
        for (j, field) in raw.iter().enumerate() {
            let cell = if is_missing_marker(field) {
                Cell::Missing
            } else {
                match kinds[j] {
                    ColumnKind::Numeric => {
                        let x = field.trim().parse::<f64>().map_err(|_| Error::Parse {
                            row: row_no,
                            message: format!(
                                "column {:?} hinted numeric but value {field:?} is not a number",
                                headers[j]
                            ),
                        })?;
                        Cell::Number(x)
                    }
                    ColumnKind::Categorical => Cell::Text(field.clone()),
                }
            };
            row.push(cell);
        }
        rows.push(row);
    }

    Frame::new(headers, kinds, rows)
}

/// Writes a frame back to CSV in the dialect [`read_csv`] accepts.
///
/// Numbers use Rust's shortest round-trip formatting, so a
/// write-then-read cycle reproduces every non-missing cell exactly.
/// Missing cells are written as the empty string.
pub fn write_csv(frame: &Frame, path: &Path) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path)?;
    wtr.write_record(frame.column_names())?;
    let mut buf = String::new();
    for row in frame.rows() {
        let record: Vec<String> = row
            .iter()
            .map(|cell| match cell {
                Cell::Number(x) => {
                    buf.clear();
                    let _ = write!(buf, "{x}");
                    buf.clone()
                }
                Cell::Text(s) => s.clone(),
                Cell::Missing => String::new(),
            })
            .collect();
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}
