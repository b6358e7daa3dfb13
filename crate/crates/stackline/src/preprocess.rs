//! Cleaning pipeline and train-fitted encoding.
//!
//! Cleaning drops configured columns, then columns above the null
//! threshold, then every row still containing a missing cell. Encoding is
//! fitted on the training split only: categorical columns get consecutive
//! integer codes, numeric columns get quantile bin edges (used solely by
//! the chi-square stage) and, optionally, min-max ranges.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::LabeledSet;
use crate::error::{Error, Result};
use crate::frame::{Cell, ColumnKind, Frame};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessConfig {
    /// Columns removed up front. Names not present in the data are ignored
    /// and reported in the clean report.
    pub drop_columns: Vec<String>,
    /// Columns whose missing fraction exceeds this are removed.
    pub null_col_threshold: f64,
    /// Explicit category orders; unlisted categorical columns are encoded
    /// in first-appearance order.
    pub ordinal_maps: BTreeMap<String, Vec<String>>,
    /// Quantile bin count for numeric columns (chi-square analysis only).
    pub n_bins: usize,
    /// When set, numeric features are min-max scaled to [0, 1] using
    /// training-split ranges. Off by default.
    pub min_max_scale: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            drop_columns: Vec::new(),
            null_col_threshold: 0.60,
            ordinal_maps: BTreeMap::new(),
            n_bins: 5,
            min_max_scale: false,
        }
    }
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.null_col_threshold) {
            return Err(Error::Config(format!(
                "null_col_threshold = {} outside [0, 1]",
                self.null_col_threshold
            )));
        }
        if self.n_bins < 2 {
            return Err(Error::Config(format!(
                "n_bins = {} must be at least 2",
                self.n_bins
            )));
        }
        Ok(())
    }
}

/// What [`clean`] removed; attached to the run manifest.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CleanReport {
    pub dropped_named: Vec<String>,
    pub ignored_absent: Vec<String>,
    pub dropped_high_null: Vec<String>,
    pub rows_before: usize,
    pub rows_after: usize,
    pub cols_before: usize,
    pub cols_after: usize,
}

/// Applies the three cleaning passes in order and reports every removal.
pub fn clean(frame: &Frame, cfg: &PreprocessConfig) -> Result<(Frame, CleanReport)> {
    cfg.validate()?;
    let mut report = CleanReport {
        rows_before: frame.n_rows(),
        cols_before: frame.n_cols(),
        ..CleanReport::default()
    };

    for name in &cfg.drop_columns {
        if frame.column_index(name).is_some() {
            report.dropped_named.push(name.clone());
        } else {
            report.ignored_absent.push(name.clone());
        }
    }
    let keep_cols: Vec<usize> = (0..frame.n_cols())
        .filter(|&j| !report.dropped_named.contains(&frame.column_names()[j]))
        .collect();
    let frame = frame.select_columns(&keep_cols)?;

    let mut keep_cols = Vec::new();
    for j in 0..frame.n_cols() {
        if frame.missing_fraction(j) > cfg.null_col_threshold {
            report.dropped_high_null.push(frame.column_names()[j].clone());
        } else {
            keep_cols.push(j);
        }
    }
    let frame = frame.select_columns(&keep_cols)?;

    let keep_rows: Vec<usize> = (0..frame.n_rows())
        .filter(|&r| !frame.row(r).iter().any(Cell::is_missing))
        .collect();
    let frame = frame.select_rows(&keep_rows)?;

    report.rows_after = frame.n_rows();
    report.cols_after = frame.n_cols();
    if frame.n_rows() == 0 || frame.n_cols() == 0 {
        return Err(Error::Pipeline(format!(
            "cleaning left an empty frame ({} rows, {} columns)",
            frame.n_rows(),
            frame.n_cols()
        )));
    }
    Ok((frame, report))
}

/// Per-column encoding state, in training-frame column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedEncoder {
    pub columns: Vec<ColumnEncoder>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnEncoder {
    pub name: String,
    #[serde(flatten)]
    pub spec: ColumnEncoderSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnEncoderSpec {
    /// Code = index into `categories`; an unseen value at transform time
    /// maps to the reserved code `categories.len()`.
    Categorical { categories: Vec<String> },
    /// `bin_edges` are strictly increasing quantile cut points (chi-square
    /// binning); `range` is present only when min-max scaling is enabled.
    Numeric {
        bin_edges: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        range: Option<(f64, f64)>,
    },
}

impl FittedEncoder {
    pub fn column(&self, name: &str) -> Option<&ColumnEncoder> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// Number of distinct codes a column can take at selection time.
    pub fn code_count(&self, name: &str) -> Option<usize> {
        self.column(name).map(|c| match &c.spec {
            ColumnEncoderSpec::Categorical { categories } => categories.len(),
            ColumnEncoderSpec::Numeric { bin_edges, .. } => bin_edges.len() + 1,
        })
    }
}

/// Quantile of sorted values by linear interpolation: position
/// `(n - 1) * q` between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Bin index of `value` against strictly increasing edges: the number of
/// edges strictly below it, so `value <= edges[0]` lands in bin 0.
pub fn bin_code(value: f64, edges: &[f64]) -> usize {
    edges.iter().filter(|&&e| value > e).count()
}

/// Learns category codes and numeric bin edges from the training split.
///
/// Requires a clean frame (no missing cells). Configured ordinal maps fix
/// the code order; other categorical columns are coded by first
/// appearance.
pub fn fit_encoder(train: &Frame, cfg: &PreprocessConfig) -> Result<FittedEncoder> {
    cfg.validate()?;
    let mut warnings = Vec::new();
    let mut columns = Vec::with_capacity(train.n_cols());
    for j in 0..train.n_cols() {
        let name = &train.column_names()[j];
        if train.column(j).any(Cell::is_missing) {
            return Err(Error::Pipeline(format!(
                "encoder fitting requires a clean frame; column {name:?} has missing cells"
            )));
        }
        let spec = match train.column_kinds()[j] {
            ColumnKind::Categorical => {
                let categories = if let Some(order) = cfg.ordinal_maps.get(name) {
                    for cell in train.column(j) {
                        let v = cell.as_text().unwrap_or_default();
                        if !order.iter().any(|c| c == v) {
                            return Err(Error::Config(format!(
                                "ordinal map for column {name:?} does not list value {v:?}"
                            )));
                        }
                    }
                    order.clone()
                } else {
                    let mut seen = Vec::new();
                    for cell in train.column(j) {
                        let v = cell.as_text().unwrap_or_default();
                        if !seen.iter().any(|s| s == v) {
                            seen.push(v.to_owned());
                        }
                    }
                    seen
                };
                if categories.len() == 1 {
                    warnings.push(format!(
                        "column {name:?} has a single category; encoded as constant 0"
                    ));
                }
                ColumnEncoderSpec::Categorical { categories }
            }
            ColumnKind::Numeric => {
                let mut values: Vec<f64> =
                    train.column(j).filter_map(Cell::as_number).collect();
                values.sort_by(f64::total_cmp);
                let range = if cfg.min_max_scale {
                    Some((
                        values.first().copied().unwrap_or(0.0),
                        values.last().copied().unwrap_or(0.0),
                    ))
                } else {
                    None
                };
                // Edges live in the same units transform emits, so the
                // chi-square stage bins scaled features consistently.
                let rescale = |v: f64| match range {
                    Some((lo, hi)) if hi > lo => (v - lo) / (hi - lo),
                    Some(_) => 0.0,
                    None => v,
                };
                let mut bin_edges = Vec::new();
                if !values.is_empty() {
                    for k in 1..cfg.n_bins {
                        let e = rescale(quantile(&values, k as f64 / cfg.n_bins as f64));
                        if bin_edges.last().is_none_or(|&last| e > last) {
                            bin_edges.push(e); // collapse tied edges
                        }
                    }
                }
                ColumnEncoderSpec::Numeric { bin_edges, range }
            }
        };
        columns.push(ColumnEncoder {
            name: name.clone(),
            spec,
        });
    }
    Ok(FittedEncoder { columns, warnings })
}

fn encode_cell(cell: &Cell, enc: &ColumnEncoder, row: usize) -> Result<f64> {
    match (&enc.spec, cell) {
        (ColumnEncoderSpec::Categorical { categories }, Cell::Text(v)) => {
            let code = categories
                .iter()
                .position(|c| c == v)
                .unwrap_or(categories.len()); // reserved code for unseen values
            Ok(code as f64)
        }
        (ColumnEncoderSpec::Numeric { range, .. }, Cell::Number(x)) => match range {
            Some((lo, hi)) if hi > lo => Ok((x - lo) / (hi - lo)),
            Some(_) => Ok(0.0), // constant training column
            None => Ok(*x),
        },
        (_, Cell::Missing) => Err(Error::Schema(format!(
            "missing cell in column {:?} at row {}; transform requires clean data",
            enc.name,
            row + 1
        ))),
        _ => Err(Error::Schema(format!(
            "cell type does not match encoder for column {:?}",
            enc.name
        ))),
    }
}

/// Identifies the positive label for a binary target column.
///
/// Categorical targets must have exactly two training categories; the one
/// spelled `yes` (case-insensitively) is positive, otherwise the category
/// with code 1. Numeric targets must contain only 0 and 1.
pub fn positive_target_cell(enc: &FittedEncoder, target: &str) -> Result<Cell> {
    let col = enc
        .column(target)
        .ok_or_else(|| Error::Schema(format!("target column {target:?} not in encoder")))?;
    match &col.spec {
        ColumnEncoderSpec::Categorical { categories } => {
            if categories.len() != 2 {
                return Err(Error::Schema(format!(
                    "target column {target:?} has {} categories, expected 2",
                    categories.len()
                )));
            }
            let positive = categories
                .iter()
                .find(|c| c.eq_ignore_ascii_case("yes"))
                .unwrap_or(&categories[1]);
            Ok(Cell::Text(positive.clone()))
        }
        ColumnEncoderSpec::Numeric { .. } => Ok(Cell::Number(1.0)),
    }
}

/// Encodes the feature columns of `frame` (everything except `target`,
/// which may be absent) into a dense numeric matrix.
pub fn transform_features(
    frame: &Frame,
    enc: &FittedEncoder,
    target: &str,
) -> Result<(Vec<Vec<f64>>, Vec<String>)> {
    let mut encoders = Vec::new();
    for col in &enc.columns {
        if col.name == target {
            continue;
        }
        let j = frame.column_index(&col.name).ok_or_else(|| {
            Error::Schema(format!(
                "frame is missing column {:?} expected by the encoder",
                col.name
            ))
        })?;
        encoders.push((j, col));
    }
    let names: Vec<String> = encoders.iter().map(|(_, c)| c.name.clone()).collect();
    let mut rows = Vec::with_capacity(frame.n_rows());
    for r in 0..frame.n_rows() {
        let mut row = Vec::with_capacity(encoders.len());
        for (j, col) in &encoders {
            row.push(encode_cell(frame.cell(r, *j), col, r)?);
        }
        rows.push(row);
    }
    Ok((rows, names))
}

/// Encodes a frame into a [`LabeledSet`], mapping the target to {0, 1}
/// with the positive class (`yes`/depressed) as 1.
pub fn transform(frame: &Frame, enc: &FittedEncoder, target: &str) -> Result<LabeledSet> {
    let tcol = frame
        .column_index(target)
        .ok_or_else(|| Error::Schema(format!("target column {target:?} not found")))?;
    let positive = positive_target_cell(enc, target)?;
    let enc_col = enc.column(target).expect("checked above");

    let mut labels = Vec::with_capacity(frame.n_rows());
    for (r, cell) in frame.column(tcol).enumerate() {
        let y = match (&enc_col.spec, cell) {
            (ColumnEncoderSpec::Categorical { categories }, Cell::Text(v)) => {
                if !categories.iter().any(|c| c == v) {
                    return Err(Error::Schema(format!(
                        "target value {v:?} at row {} was not seen in training",
                        r + 1
                    )));
                }
                u8::from(cell == &positive)
            }
            (ColumnEncoderSpec::Numeric { .. }, Cell::Number(x)) => {
                if *x == 0.0 {
                    0
                } else if *x == 1.0 {
                    1
                } else {
                    return Err(Error::Schema(format!(
                        "numeric target must be 0 or 1, got {x} at row {}",
                        r + 1
                    )));
                }
            }
            _ => {
                return Err(Error::Schema(format!(
                    "target cell at row {} does not match the encoder",
                    r + 1
                )))
            }
        };
        labels.push(y);
    }

    let (features, names) = transform_features(frame, enc, target)?;
    LabeledSet::new(features, labels, names)
}
