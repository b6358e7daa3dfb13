//! Chi-square test of independence and significance-threshold feature
//! selection.
//!
//! The statistic compares observed contingency counts against the
//! products of the margins; its tail probability comes from the
//! regularized incomplete gamma functions in [`crate::gamma`], split at
//! `statistic = dof + 1` between the series and continued-fraction
//! routes.

use serde::{Deserialize, Serialize};

use crate::dataset::LabeledSet;
use crate::error::{Error, Result};
use crate::gamma;
use crate::preprocess::{bin_code, ColumnEncoderSpec, FittedEncoder};

/// Cross-tabulation of feature codes against the binary target.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>, // rows = feature codes with nonzero total
    row_totals: Vec<u64>,
    col_totals: Vec<u64>,
    grand_total: u64,
}

impl ContingencyTable {
    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn grand_total(&self) -> u64 {
        self.grand_total
    }

    /// Builds a table directly from counts, dropping all-zero rows.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let n_cols = counts.first().map_or(0, Vec::len);
        if counts.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Shape("ragged contingency counts".into()));
        }
        let counts: Vec<Vec<u64>> = counts
            .into_iter()
            .filter(|r| r.iter().sum::<u64>() > 0)
            .collect();
        let row_totals: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
        let col_totals: Vec<u64> = (0..n_cols)
            .map(|j| counts.iter().map(|r| r[j]).sum())
            .collect();
        let grand_total = row_totals.iter().sum();
        if grand_total == 0 {
            return Err(Error::Stat("empty contingency table".into()));
        }
        Ok(Self {
            counts,
            row_totals,
            col_totals,
            grand_total,
        })
    }

    /// True when fewer than two rows or two columns carry any counts, so
    /// the independence test is undefined.
    pub fn is_degenerate(&self) -> bool {
        let live_cols = self.col_totals.iter().filter(|&&c| c > 0).count();
        self.counts.len() < 2 || live_cols < 2
    }
}

/// Tabulates codes against labels. Codes must lie in
/// `[0, n_codes)`; rows whose total is zero are dropped before testing.
pub fn contingency(codes: &[usize], labels: &[u8], n_codes: usize) -> Result<ContingencyTable> {
    if codes.is_empty() {
        return Err(Error::Stat("empty input to contingency".into()));
    }
    if codes.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} codes but {} labels",
            codes.len(),
            labels.len()
        )));
    }
    let mut counts = vec![vec![0u64; 2]; n_codes];
    for (&code, &label) in codes.iter().zip(labels) {
        if code >= n_codes {
            return Err(Error::Shape(format!(
                "code {code} outside [0, {n_codes})"
            )));
        }
        if label > 1 {
            return Err(Error::Schema(format!("label {label} is not 0 or 1")));
        }
        counts[code][label as usize] += 1;
    }
    ContingencyTable::from_counts(counts)
}

/// Sum over cells of (observed − expected)² / expected, with expected
/// counts derived from the margins. All-zero columns are removed first;
/// degrees of freedom are `(rows − 1)(cols − 1)` on the surviving
/// dimensions.
pub fn chi_square_statistic(table: &ContingencyTable) -> Result<(f64, usize)> {
    let live_cols: Vec<usize> = (0..table.col_totals.len())
        .filter(|&j| table.col_totals[j] > 0)
        .collect();
    let m = table.counts.len();
    let n = live_cols.len();
    if m < 2 || n < 2 {
        return Err(Error::Stat("degenerate table".into()));
    }
    let grand = table.grand_total as f64;
    let mut statistic = 0.0;
    for (i, row) in table.counts.iter().enumerate() {
        for &j in &live_cols {
            let observed = row[j] as f64;
            let expected = table.row_totals[i] as f64 * table.col_totals[j] as f64 / grand;
            let diff = observed - expected;
            statistic += diff * diff / expected;
        }
    }
    Ok((statistic, (m - 1) * (n - 1)))
}

/// Tail probability P(X² >= statistic) for a chi-square distribution with
/// `dof` degrees of freedom.
///
/// Computed as 1 minus the regularized lower incomplete gamma
/// P(dof/2, statistic/2): the series expansion serves statistics below
/// `dof + 1`, the continued fraction everything above.
pub fn chi2_sf(statistic: f64, dof: usize) -> Result<f64> {
    if statistic < 0.0 {
        return Err(Error::Domain(format!(
            "chi-square statistic must be nonnegative, got {statistic}"
        )));
    }
    if dof == 0 {
        return Err(Error::Domain("degrees of freedom must be positive".into()));
    }
    let a = dof as f64 / 2.0;
    let x = statistic / 2.0;
    if statistic < dof as f64 + 1.0 {
        Ok((1.0 - gamma::lower_regularized_series(a, x)?).clamp(0.0, 1.0))
    } else {
        gamma::upper_regularized_cf(a, x)
    }
}

/// Per-feature test outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub feature_name: String,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub kept: bool,
}

/// Tests every feature against the labels and keeps those with
/// `p < alpha`.
///
/// Numeric features are discretized with the encoder's quantile edges;
/// categorical features already hold their integer codes. A feature whose
/// table is degenerate (e.g. a constant column) is reported with p = 1
/// and never kept. Results are sorted ascending by p-value (ties by
/// name).
pub fn select_features(
    train: &LabeledSet,
    enc: &FittedEncoder,
    alpha: f64,
) -> Result<(Vec<String>, Vec<ChiSquareResult>)> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Config(format!("alpha = {alpha} outside (0, 1)")));
    }
    if train.n_rows() == 0 {
        return Err(Error::Stat("empty training set".into()));
    }
    let mut results = Vec::with_capacity(train.n_features());
    for (f, name) in train.feature_names.iter().enumerate() {
        let col = enc
            .column(name)
            .ok_or_else(|| Error::Schema(format!("feature {name:?} not in encoder")))?;
        let (codes, n_codes): (Vec<usize>, usize) = match &col.spec {
            ColumnEncoderSpec::Numeric { bin_edges, .. } => (
                train
                    .features
                    .iter()
                    .map(|row| bin_code(row[f], bin_edges))
                    .collect(),
                bin_edges.len() + 1,
            ),
            ColumnEncoderSpec::Categorical { categories } => (
                train.features.iter().map(|row| row[f] as usize).collect(),
                categories.len() + 1, // reserved unseen code may appear
            ),
        };
        let table = contingency(&codes, &train.labels, n_codes)?;
        let (statistic, dof, p_value) = if table.is_degenerate() {
            (0.0, 0, 1.0)
        } else {
            let (stat, dof) = chi_square_statistic(&table)?;
            (stat, dof, chi2_sf(stat, dof)?)
        };
        results.push(ChiSquareResult {
            feature_name: name.clone(),
            statistic,
            dof,
            p_value,
            kept: dof > 0 && p_value < alpha,
        });
    }
    results.sort_by(|a, b| {
        a.p_value
            .total_cmp(&b.p_value)
            .then_with(|| a.feature_name.cmp(&b.feature_name))
    });
    let kept: Vec<String> = results
        .iter()
        .filter(|r| r.kept)
        .map(|r| r.feature_name.clone())
        .collect();
    if kept.is_empty() {
        return Err(Error::Selection(format!(
            "no feature reached significance at alpha = {alpha}; consider a larger alpha"
        )));
    }
    Ok((kept, results))
}
