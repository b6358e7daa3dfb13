//! Seeded synthetic survey generator.
//!
//! Produces a frame shaped like the survey exports the pipeline
//! consumes: numeric columns (informative ones drawn from
//! class-conditional Gaussians at unit separation, noise ones
//! class-independent), weighted categorical columns, injected missing
//! cells, and a Yes/No `Depression` target in the last column.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Cell, ColumnKind, Frame};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoricalSpec {
    pub name: String,
    pub categories: Vec<String>,
    /// Sampling weights per category given class 0; any positive scale.
    pub class0_weights: Vec<f64>,
    /// Sampling weights per category given class 1.
    pub class1_weights: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_rows: usize,
    /// Fraction of positive rows; the count is `floor(n_rows * balance)`.
    pub class_balance: f64,
    pub informative_features: usize,
    pub noise_features: usize,
    pub categorical_specs: Vec<CategoricalSpec>,
    /// Per-column probability of blanking a feature cell (the target is
    /// never blanked).
    pub missing_rate: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_rows: 2000,
            class_balance: 0.5,
            informative_features: 5,
            noise_features: 5,
            categorical_specs: default_categorical_specs(),
            missing_rate: 0.05,
            seed: 42,
        }
    }
}

/// Three survey-flavored categorical columns whose per-class weights
/// carry real signal.
pub fn default_categorical_specs() -> Vec<CategoricalSpec> {
    vec![
        CategoricalSpec {
            name: "Family History".into(),
            categories: vec!["No".into(), "Yes".into()],
            class0_weights: vec![0.85, 0.15],
            class1_weights: vec![0.15, 0.85],
        },
        CategoricalSpec {
            name: "Sleep Duration".into(),
            categories: vec!["<5h".into(), "5-6h".into(), "7-8h".into(), ">8h".into()],
            class0_weights: vec![0.10, 0.15, 0.30, 0.45],
            class1_weights: vec![0.45, 0.30, 0.15, 0.10],
        },
        CategoricalSpec {
            name: "Dietary Habits".into(),
            categories: vec!["Healthy".into(), "Moderate".into(), "Unhealthy".into()],
            class0_weights: vec![0.70, 0.20, 0.10],
            class1_weights: vec![0.10, 0.20, 0.70],
        },
    ]
}

/// Survey-flavored names for the informative numeric columns; extra
/// columns fall back to indexed names.
fn informative_name(i: usize) -> String {
    const POOL: [&str; 5] = [
        "Age",
        "Work Pressure",
        "Job Satisfaction",
        "Financial Stress",
        "Work Hours",
    ];
    POOL.get(i)
        .map(|s| (*s).to_owned())
        .unwrap_or_else(|| format!("Signal {}", i + 1))
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_rows < 2 {
            return Err(Error::Config(format!(
                "n_rows = {} must be at least 2",
                self.n_rows
            )));
        }
        let n_pos = (self.n_rows as f64 * self.class_balance).floor() as usize;
        if n_pos == 0 || n_pos == self.n_rows {
            return Err(Error::Config(format!(
                "class_balance = {} leaves a class empty for {} rows",
                self.class_balance, self.n_rows
            )));
        }
        if !(0.0..1.0).contains(&self.missing_rate) {
            return Err(Error::Config(format!(
                "missing_rate = {} outside [0, 1)",
                self.missing_rate
            )));
        }
        for spec in &self.categorical_specs {
            for weights in [&spec.class0_weights, &spec.class1_weights] {
                if weights.len() != spec.categories.len() {
                    return Err(Error::Config(format!(
                        "column {:?}: {} weights for {} categories",
                        spec.name,
                        weights.len(),
                        spec.categories.len()
                    )));
                }
                if weights.iter().any(|&w| w < 0.0) || weights.iter().sum::<f64>() <= 0.0 {
                    return Err(Error::Config(format!(
                        "column {:?}: weights must be nonnegative with a positive sum",
                        spec.name
                    )));
                }
            }
        }
        Ok(())
    }
}

fn sample_category<'a>(spec: &'a CategoricalSpec, label: u8, rng: &mut SeededRng) -> &'a str {
    let weights = if label == 1 {
        &spec.class1_weights
    } else {
        &spec.class0_weights
    };
    let total: f64 = weights.iter().sum();
    let mut u = rng.uniform() * total;
    for (category, &w) in spec.categories.iter().zip(weights) {
        if u < w {
            return category;
        }
        u -= w;
    }
    spec.categories.last().expect("validated non-empty")
}

/// Generates the dataset. One RNG stream drives everything in a fixed
/// order (label shuffle, then row-major cell draws, then the missing
/// pass), so a seed fixes the output bytes.
pub fn generate(cfg: &SynthConfig) -> Result<Frame> {
    cfg.validate()?;
    let mut rng = SeededRng::new(cfg.seed);

    let n_pos = (cfg.n_rows as f64 * cfg.class_balance).floor() as usize;
    let mut labels = vec![0u8; cfg.n_rows];
    for y in labels.iter_mut().take(n_pos) {
        *y = 1;
    }
    rng.shuffle(&mut labels);

    let mut names = Vec::new();
    let mut kinds = Vec::new();
    for i in 0..cfg.informative_features {
        names.push(informative_name(i));
        kinds.push(ColumnKind::Numeric);
    }
    for i in 0..cfg.noise_features {
        names.push(format!("Noise {}", i + 1));
        kinds.push(ColumnKind::Numeric);
    }
    for spec in &cfg.categorical_specs {
        names.push(spec.name.clone());
        kinds.push(ColumnKind::Categorical);
    }
    names.push("Depression".into());
    kinds.push(ColumnKind::Categorical);
    let n_feature_cols = names.len() - 1;

    let mut rows: Vec<Vec<Cell>> = Vec::with_capacity(cfg.n_rows);
    for &label in &labels {
        let mut row = Vec::with_capacity(names.len());
        for _ in 0..cfg.informative_features {
            // Unit separation: class means 0 and 1, unit variance.
            row.push(Cell::Number(rng.normal() + label as f64));
        }
        for _ in 0..cfg.noise_features {
            row.push(Cell::Number(rng.normal()));
        }
        for spec in &cfg.categorical_specs {
            row.push(Cell::Text(sample_category(spec, label, &mut rng).to_owned()));
        }
        row.push(Cell::Text(if label == 1 { "Yes" } else { "No" }.to_owned()));
        rows.push(row);
    }

    if cfg.missing_rate > 0.0 {
        for row in &mut rows {
            for cell in row.iter_mut().take(n_feature_cols) {
                if rng.uniform() < cfg.missing_rate {
                    *cell = Cell::Missing;
                }
            }
        }
    }

    Frame::new(names, kinds, rows)
}
