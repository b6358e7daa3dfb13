//! Linear soft-margin SVM trained in the primal.
//!
//! The objective is the slack-eliminated hinge form
//! `0.5 * |w|^2 + lambda * sum_j max(0, 1 - y_j * (w . x_j + b))`
//! minimized by deterministic epoch-wise subgradient descent with step
//! `1 / (lambda * t)`. Individual iterates oscillate at that step size;
//! the objective trend is monotone under window averaging. Probabilities
//! come from Platt scaling fitted on the training decision values.

use serde::{Deserialize, Serialize};

use super::platt::PlattCalibration;
use super::{check_fitted, check_shape, Learner};
use crate::dataset::LabeledSet;
use crate::error::{Error, Result};
use crate::model_io::{dec17, dec17_scalar};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SvmModel {
    pub lambda: f64,
    pub epochs: usize,
    #[serde(with = "dec17")]
    pub weights: Vec<f64>,
    #[serde(with = "dec17_scalar")]
    pub bias: f64,
    pub calibration: Option<PlattCalibration>,
    #[serde(default)]
    pub n_features: usize,
}

/// Per-epoch objective values recorded during training.
#[derive(Debug, Clone)]
pub struct SvmAudit {
    pub epoch_objectives: Vec<f64>,
}

impl SvmModel {
    pub fn new(lambda: f64, epochs: usize) -> Self {
        Self {
            lambda,
            epochs,
            weights: Vec::new(),
            bias: 0.0,
            calibration: None,
            n_features: 0,
        }
    }

    /// Raw decision value `w . x + b`.
    pub fn decision_value(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    /// Hinge objective on a dataset with labels mapped to {-1, +1}.
    pub fn objective(&self, set: &LabeledSet) -> f64 {
        let hinge: f64 = set
            .features
            .iter()
            .zip(&set.labels)
            .map(|(x, &label)| {
                let y = if label == 1 { 1.0 } else { -1.0 };
                (1.0 - y * self.decision_value(x)).max(0.0)
            })
            .sum();
        let norm: f64 = self.weights.iter().map(|w| w * w).sum();
        0.5 * norm + self.lambda * hinge
    }

    /// Training entry point that also returns the per-epoch objectives.
    pub fn fit_with_audit(&mut self, train: &LabeledSet, _seed: u64) -> Result<SvmAudit> {
        if self.lambda <= 0.0 {
            return Err(Error::Config(format!(
                "svm lambda must be positive, got {}",
                self.lambda
            )));
        }
        if train.n_rows() == 0 {
            return Err(Error::Train("svm requires a non-empty training set".into()));
        }
        let d = train.n_features();
        let signed: Vec<f64> = train
            .labels
            .iter()
            .map(|&y| if y == 1 { 1.0 } else { -1.0 })
            .collect();

        self.weights = vec![0.0; d];
        self.bias = 0.0;
        self.n_features = d;
        let mut objectives = Vec::with_capacity(self.epochs);
        for t in 1..=self.epochs {
            // Subgradient of the full objective at the current iterate.
            let mut grad_w = self.weights.clone();
            let mut grad_b = 0.0;
            for (x, &y) in train.features.iter().zip(&signed) {
                if y * self.decision_value(x) < 1.0 {
                    for (g, &v) in grad_w.iter_mut().zip(x) {
                        *g -= self.lambda * y * v;
                    }
                    grad_b -= self.lambda * y;
                }
            }
            let step = 1.0 / (self.lambda * t as f64);
            for (w, g) in self.weights.iter_mut().zip(&grad_w) {
                *w -= step * g;
            }
            self.bias -= step * grad_b;

            let objective = self.objective(train);
            if !objective.is_finite() {
                return Err(Error::Divergence {
                    epoch: t,
                    message: format!("svm objective became {objective}"),
                });
            }
            objectives.push(objective);
        }

        let scores: Vec<f64> = train
            .features
            .iter()
            .map(|x| self.decision_value(x))
            .collect();
        self.calibration = Some(PlattCalibration::fit(&scores, &train.labels)?);
        Ok(SvmAudit {
            epoch_objectives: objectives,
        })
    }
}

impl Learner for SvmModel {
    fn name(&self) -> &'static str {
        "svm"
    }

    fn fit(&mut self, train: &LabeledSet, seed: u64) -> Result<()> {
        self.fit_with_audit(train, seed).map(|_| ())
    }

    fn predict_proba(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        check_fitted(self.n_features, self.name())?;
        check_shape(features, self.n_features, self.name())?;
        let cal = self
            .calibration
            .ok_or_else(|| Error::Train("svm model has no calibration".into()))?;
        Ok(features
            .iter()
            .map(|x| cal.probability(self.decision_value(x)))
            .collect())
    }

    fn clone_unfit(&self) -> Box<dyn Learner> {
        Box::new(Self::new(self.lambda, self.epochs))
    }
}
