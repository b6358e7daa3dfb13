//! Gradient boosting: additive regression stumps on the logistic loss
//! with shrinkage, Newton leaf values.

use serde::{Deserialize, Serialize};

use super::{check_fitted, check_shape, sigmoid, Learner};
use crate::dataset::LabeledSet;
use crate::error::{Error, Result};
use crate::model_io::dec17_scalar;

/// Regression stump: rows with `x[feature] <= threshold` take
/// `left_value`, the rest `right_value`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RegStump {
    pub feature: usize,
    #[serde(with = "dec17_scalar")]
    pub threshold: f64,
    #[serde(with = "dec17_scalar")]
    pub left_value: f64,
    #[serde(with = "dec17_scalar")]
    pub right_value: f64,
}

impl RegStump {
    pub fn predict(&self, x: &[f64]) -> f64 {
        if x[self.feature] <= self.threshold {
            self.left_value
        } else {
            self.right_value
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradBoostModel {
    pub rounds: usize,
    pub shrinkage: f64,
    #[serde(with = "dec17_scalar")]
    pub init_score: f64,
    pub stumps: Vec<RegStump>,
    #[serde(default)]
    pub n_features: usize,
}

/// Best least-squares split of the residuals: maximizes
/// `(sum_L r)^2 / n_L + (sum_R r)^2 / n_R` over features and midpoints.
/// Returns `(feature, threshold, left_rows, right_rows)`.
fn best_split(
    features: &[Vec<f64>],
    residuals: &[f64],
    order: &[Vec<usize>],
) -> Option<(usize, f64)> {
    let n = residuals.len();
    let total: f64 = residuals.iter().sum();
    let mut best: Option<(f64, usize, f64)> = None; // (gain, feature, threshold)
    for (f, idx) in order.iter().enumerate() {
        let mut left_sum = 0.0;
        for (pos, w) in idx.windows(2).enumerate() {
            let (i, j) = (w[0], w[1]);
            left_sum += residuals[i];
            let (lo, hi) = (features[i][f], features[j][f]);
            if hi <= lo {
                continue;
            }
            let n_left = (pos + 1) as f64;
            let n_right = (n - pos - 1) as f64;
            let right_sum = total - left_sum;
            let gain = left_sum * left_sum / n_left + right_sum * right_sum / n_right;
            if best.is_none_or(|(g, _, _)| gain > g) {
                best = Some((gain, f, (lo + hi) / 2.0));
            }
        }
    }
    best.map(|(_, f, t)| (f, t))
}

impl GradBoostModel {
    pub fn new(rounds: usize, shrinkage: f64) -> Self {
        Self {
            rounds,
            shrinkage,
            init_score: 0.0,
            stumps: Vec::new(),
            n_features: 0,
        }
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        self.init_score
            + self.shrinkage
                * self
                    .stumps
                    .iter()
                    .map(|s| s.predict(x))
                    .sum::<f64>()
    }
}

impl Learner for GradBoostModel {
    fn name(&self) -> &'static str {
        "grad_boost"
    }

    fn fit(&mut self, train: &LabeledSet, _seed: u64) -> Result<()> {
        if self.shrinkage <= 0.0 {
            return Err(Error::Config(format!(
                "gradient boosting shrinkage must be positive, got {}",
                self.shrinkage
            )));
        }
        let n = train.n_rows();
        let n_pos = train.positives();
        if n_pos == 0 || n_pos == n {
            return Err(Error::Train(
                "gradient boosting requires both classes present".into(),
            ));
        }
        let d = train.n_features();
        let order: Vec<Vec<usize>> = (0..d)
            .map(|f| {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| train.features[a][f].total_cmp(&train.features[b][f]));
                idx
            })
            .collect();

        let base_rate = n_pos as f64 / n as f64;
        self.init_score = (base_rate / (1.0 - base_rate)).ln();
        self.stumps.clear();
        self.n_features = d;

        let mut scores = vec![self.init_score; n];
        for _ in 0..self.rounds {
            let probs: Vec<f64> = scores.iter().map(|&s| sigmoid(s)).collect();
            let residuals: Vec<f64> = train
                .labels
                .iter()
                .zip(&probs)
                .map(|(&t, &p)| t as f64 - p)
                .collect();
            let Some((feature, threshold)) = best_split(&train.features, &residuals, &order)
            else {
                break; // every feature constant; nothing to split on
            };

            // Newton leaf values: sum residual / sum hessian per side.
            let mut sums = [0.0f64; 2];
            let mut hess = [0.0f64; 2];
            for ((x, &r), &p) in train.features.iter().zip(&residuals).zip(&probs) {
                let side = usize::from(x[feature] > threshold);
                sums[side] += r;
                hess[side] += p * (1.0 - p);
            }
            let stump = RegStump {
                feature,
                threshold,
                left_value: sums[0] / hess[0].max(1e-12),
                right_value: sums[1] / hess[1].max(1e-12),
            };
            for (s, x) in scores.iter_mut().zip(&train.features) {
                *s += self.shrinkage * stump.predict(x);
            }
            if scores.iter().any(|s| !s.is_finite()) {
                return Err(Error::Train(
                    "gradient boosting produced non-finite stage values".into(),
                ));
            }
            self.stumps.push(stump);
        }
        if self.stumps.is_empty() {
            return Err(Error::Train(
                "no valid split: every feature is constant".into(),
            ));
        }
        Ok(())
    }

    fn predict_proba(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        check_fitted(self.n_features, self.name())?;
        check_shape(features, self.n_features, self.name())?;
        Ok(features.iter().map(|x| sigmoid(self.score(x))).collect())
    }

    fn clone_unfit(&self) -> Box<dyn Learner> {
        Box::new(Self::new(self.rounds, self.shrinkage))
    }
}
