//! AdaBoost over depth-1 decision stumps.
//!
//! Each round fits the best stump under the current sample weights by an
//! exhaustive sweep: every feature, every midpoint between consecutive
//! distinct values, both polarities. Sample weights renormalize to sum 1
//! after every round.

use serde::{Deserialize, Serialize};

use super::{check_fitted, check_shape, sigmoid, Learner};
use crate::dataset::LabeledSet;
use crate::error::{Error, Result};
use crate::model_io::dec17_scalar;

/// One weak learner: predicts +1 when `polarity * (x[feature] - threshold)`
/// is positive, else -1.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Stump {
    pub feature: usize,
    #[serde(with = "dec17_scalar")]
    pub threshold: f64,
    pub polarity: i8,
}

impl Stump {
    pub fn predict(&self, x: &[f64]) -> f64 {
        let raw = if x[self.feature] > self.threshold {
            1.0
        } else {
            -1.0
        };
        raw * self.polarity as f64
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdaBoostModel {
    pub rounds: usize,
    pub stumps: Vec<Stump>,
    #[serde(with = "crate::model_io::dec17")]
    pub betas: Vec<f64>,
    #[serde(default)]
    pub n_features: usize,
}

/// Per-round training diagnostics.
#[derive(Debug, Clone, Default)]
pub struct BoostAudit {
    /// Sum of the sample weights after each round's renormalization.
    pub weight_sums: Vec<f64>,
    /// Weighted error of each kept round's stump.
    pub errors: Vec<f64>,
}

/// Round weight from a weighted error: `0.5 * ln((1 - e) / e)`.
pub fn round_weight(error: f64) -> f64 {
    let e = error.clamp(1e-10, 1.0 - 1e-10);
    0.5 * ((1.0 - e) / e).ln()
}

/// Best stump under the given sample weights, by exhaustive midpoint
/// sweep. `order[f]` holds row indices sorted by feature `f`. Returns the
/// stump and its weighted error, or `None` when every feature is
/// constant.
fn best_stump(
    features: &[Vec<f64>],
    signed_labels: &[f64],
    weights: &[f64],
    order: &[Vec<usize>],
) -> Option<(Stump, f64)> {
    let total_negative_weight: f64 = signed_labels
        .iter()
        .zip(weights)
        .filter(|&(&y, _)| y < 0.0)
        .map(|(_, &w)| w)
        .sum();
    let mut best: Option<(Stump, f64)> = None;
    for (f, idx) in order.iter().enumerate() {
        // Threshold below every value predicts +1 everywhere (polarity +1),
        // so the starting error is the weight of the negative class.
        let mut err_plus = total_negative_weight;
        for w in idx.windows(2) {
            let (i, j) = (w[0], w[1]);
            // Sample i moves to the "predict -1" side.
            err_plus += weights[i] * signed_labels[i];
            let (lo, hi) = (features[i][f], features[j][f]);
            if hi <= lo {
                continue;
            }
            let threshold = (lo + hi) / 2.0;
            for (err, polarity) in [(err_plus, 1i8), (1.0 - err_plus, -1i8)] {
                if best.as_ref().is_none_or(|(_, b)| err < *b) {
                    best = Some((
                        Stump {
                            feature: f,
                            threshold,
                            polarity,
                        },
                        err,
                    ));
                }
            }
        }
    }
    best
}

impl AdaBoostModel {
    pub fn new(rounds: usize) -> Self {
        Self {
            rounds,
            stumps: Vec::new(),
            betas: Vec::new(),
            n_features: 0,
        }
    }

    /// Weighted vote margin normalized by the total round weight.
    fn normalized_margin(&self, x: &[f64]) -> f64 {
        let total: f64 = self.betas.iter().sum();
        if total == 0.0 {
            return 0.0;
        }
        let vote: f64 = self
            .stumps
            .iter()
            .zip(&self.betas)
            .map(|(s, b)| b * s.predict(x))
            .sum();
        vote / total
    }

    pub fn fit_with_audit(&mut self, train: &LabeledSet, _seed: u64) -> Result<BoostAudit> {
        let n = train.n_rows();
        if n == 0 {
            return Err(Error::Train("adaboost requires a non-empty training set".into()));
        }
        if train.positives() == 0 || train.positives() == n {
            return Err(Error::Train("adaboost requires both classes present".into()));
        }
        let d = train.n_features();
        let signed: Vec<f64> = train
            .labels
            .iter()
            .map(|&y| if y == 1 { 1.0 } else { -1.0 })
            .collect();

        // Pre-sort rows per feature once; the sweep reuses the order
        // every round.
        let order: Vec<Vec<usize>> = (0..d)
            .map(|f| {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| train.features[a][f].total_cmp(&train.features[b][f]));
                idx
            })
            .collect();
        if (0..d).all(|f| {
            let idx = &order[f];
            train.features[idx[0]][f] == train.features[idx[n - 1]][f]
        }) {
            return Err(Error::Train(
                "no valid stump: every feature is constant".into(),
            ));
        }

        self.stumps.clear();
        self.betas.clear();
        self.n_features = d;
        let mut weights = vec![1.0 / n as f64; n];
        let mut audit = BoostAudit::default();
        for _ in 0..self.rounds {
            let Some((stump, error)) = best_stump(&train.features, &signed, &weights, &order)
            else {
                break;
            };
            if error >= 0.5 {
                // No better than chance under the current weights: discard
                // this round and stop.
                break;
            }
            let beta = round_weight(error);
            self.stumps.push(stump);
            self.betas.push(beta);
            audit.errors.push(error);

            for (w, (x, &y)) in weights
                .iter_mut()
                .zip(train.features.iter().zip(&signed))
            {
                *w *= (-beta * y * stump.predict(x)).exp();
            }
            let sum: f64 = weights.iter().sum();
            if sum <= 0.0 || !sum.is_finite() {
                return Err(Error::Train(format!(
                    "adaboost sample weights degenerated (sum = {sum})"
                )));
            }
            for w in &mut weights {
                *w /= sum;
            }
            audit.weight_sums.push(weights.iter().sum());

            if error < 1e-10 {
                break; // perfect stump; further rounds cannot improve
            }
        }
        if self.stumps.is_empty() {
            return Err(Error::Train(
                "no valid stump improved on chance in round 1".into(),
            ));
        }
        Ok(audit)
    }
}

impl Learner for AdaBoostModel {
    fn name(&self) -> &'static str {
        "adaboost"
    }

    fn fit(&mut self, train: &LabeledSet, seed: u64) -> Result<()> {
        self.fit_with_audit(train, seed).map(|_| ())
    }

    /// Probability via the sigmoid of twice the normalized vote margin.
    fn predict_proba(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        check_fitted(self.n_features, self.name())?;
        check_shape(features, self.n_features, self.name())?;
        Ok(features
            .iter()
            .map(|x| sigmoid(2.0 * self.normalized_margin(x)))
            .collect())
    }

    fn clone_unfit(&self) -> Box<dyn Learner> {
        Box::new(Self::new(self.rounds))
    }
}
