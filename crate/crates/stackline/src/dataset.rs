//! Deterministic splitting and class balancing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Cell, Frame};
use crate::rng::SeededRng;

/// Train/test/validation proportions plus the shuffle seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_frac: f64,
    pub test_frac: f64,
    pub val_frac: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train_frac: f64, test_frac: f64, val_frac: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            train_frac,
            test_frac,
            val_frac,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, f) in [
            ("train_frac", self.train_frac),
            ("test_frac", self.test_frac),
            ("val_frac", self.val_frac),
        ] {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::Config(format!("{name} = {f} outside [0, 1]")));
            }
        }
        let sum = self.train_frac + self.test_frac + self.val_frac;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "split fractions sum to {sum}, expected 1.0"
            )));
        }
        Ok(())
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_frac: 0.7,
            test_frac: 0.2,
            val_frac: 0.1,
            seed: 42,
        }
    }
}

/// Model-ready dataset: a dense feature matrix plus binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSet {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    pub feature_names: Vec<String>,
}

impl LabeledSet {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<u8>, feature_names: Vec<String>) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        let d = feature_names.len();
        for (i, row) in features.iter().enumerate() {
            if row.len() != d {
                return Err(Error::Shape(format!(
                    "feature row {i} has {} values, expected {d}",
                    row.len()
                )));
            }
        }
        if let Some(bad) = labels.iter().find(|&&y| y > 1) {
            return Err(Error::Schema(format!("label {bad} is not 0 or 1")));
        }
        Ok(Self {
            features,
            labels,
            feature_names,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&y| y == 1).count()
    }

    /// Subset of rows, in the given order.
    pub fn select_rows(&self, keep: &[usize]) -> Self {
        Self {
            features: keep.iter().map(|&i| self.features[i].clone()).collect(),
            labels: keep.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Projection onto the named features, in the order given.
    pub fn select_features(&self, names: &[String]) -> Result<Self> {
        let cols: Vec<usize> = names
            .iter()
            .map(|n| {
                self.feature_names
                    .iter()
                    .position(|f| f == n)
                    .ok_or_else(|| Error::Schema(format!("unknown feature {n:?}")))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            features: self
                .features
                .iter()
                .map(|row| cols.iter().map(|&c| row[c]).collect())
                .collect(),
            labels: self.labels.clone(),
            feature_names: names.to_vec(),
        })
    }
}

/// Shuffles rows with the spec's seed and partitions them into
/// train/test/val. Test and val receive `floor(frac * n)` rows each;
/// the remainder goes to train, so no row is lost or duplicated.
pub fn split(frame: &Frame, spec: &SplitSpec) -> Result<(Frame, Frame, Frame)> {
    spec.validate()?;
    let n = frame.n_rows();
    if n < 10 {
        return Err(Error::Config(format!(
            "split requires at least 10 rows, got {n}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    SeededRng::new(spec.seed).shuffle(&mut order);

    let n_test = (spec.test_frac * n as f64).floor() as usize;
    let n_val = (spec.val_frac * n as f64).floor() as usize;
    let n_train = n - n_test - n_val;

    let train = frame.select_rows(&order[..n_train])?;
    let test = frame.select_rows(&order[n_train..n_train + n_test])?;
    let val = frame.select_rows(&order[n_train + n_test..])?;
    Ok((train, test, val))
}

/// Indices that survive undersampling the majority class down to the
/// minority count, followed by a deterministic reshuffle. Shared by the
/// [`LabeledSet`] and [`Frame`] balancing entry points.
fn undersample_order(is_positive: &[bool], seed: u64) -> Result<Vec<usize>> {
    let pos: Vec<usize> = (0..is_positive.len()).filter(|&i| is_positive[i]).collect();
    let neg: Vec<usize> = (0..is_positive.len()).filter(|&i| !is_positive[i]).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::Balance(format!(
            "both classes must be present (got {} positive, {} negative)",
            pos.len(),
            neg.len()
        )));
    }
    let target = pos.len().min(neg.len());
    let mut rng = SeededRng::new(seed);
    let sample = |rows: &[usize], rng: &mut SeededRng| -> Vec<usize> {
        if rows.len() == target {
            rows.to_vec()
        } else {
            rng.sample_indices(rows.len(), target)
                .into_iter()
                .map(|i| rows[i])
                .collect()
        }
    };
    let mut keep = sample(&pos, &mut rng);
    keep.extend(sample(&neg, &mut rng));
    rng.shuffle(&mut keep);
    Ok(keep)
}

/// Randomly undersamples the majority class (without replacement) to the
/// minority count and reshuffles the surviving rows.
pub fn balance(set: &LabeledSet, seed: u64) -> Result<LabeledSet> {
    let flags: Vec<bool> = set.labels.iter().map(|&y| y == 1).collect();
    let keep = undersample_order(&flags, seed)?;
    Ok(set.select_rows(&keep))
}

/// Frame-level balancing on a binary target column; used when the
/// pipeline balances the training split before encoding. A row counts as
/// positive when its target cell matches `positive`.
pub fn balance_frame(frame: &Frame, target: &str, positive: &Cell, seed: u64) -> Result<Frame> {
    let col = frame
        .column_index(target)
        .ok_or_else(|| Error::Schema(format!("target column {target:?} not found")))?;
    let flags: Vec<bool> = frame.column(col).map(|c| c == positive).collect();
    let keep = undersample_order(&flags, seed)?;
    frame.select_rows(&keep)
}
