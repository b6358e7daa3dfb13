//! Logistic regression by full-batch gradient descent on cross-entropy,
//! deterministic zero initialization. Doubles as the stacking
//! meta-learner.

use serde::{Deserialize, Serialize};

use super::{check_fitted, check_shape, sigmoid, Learner};
use crate::dataset::LabeledSet;
use crate::error::{Error, Result};
use crate::model_io::{dec17, dec17_scalar};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogRegModel {
    pub learning_rate: f64,
    pub epochs: usize,
    #[serde(with = "dec17")]
    pub weights: Vec<f64>,
    #[serde(with = "dec17_scalar")]
    pub bias: f64,
    #[serde(default)]
    pub n_features: usize,
}

impl LogRegModel {
    pub fn new(learning_rate: f64, epochs: usize) -> Self {
        Self {
            learning_rate,
            epochs,
            weights: Vec::new(),
            bias: 0.0,
            n_features: 0,
        }
    }

    pub fn probability(&self, x: &[f64]) -> f64 {
        sigmoid(self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias)
    }

    /// Mean cross-entropy over the batch.
    pub fn loss(&self, set: &LabeledSet) -> f64 {
        let m = set.n_rows() as f64;
        set.features
            .iter()
            .zip(&set.labels)
            .map(|(x, &y)| {
                let p = self.probability(x).clamp(1e-12, 1.0 - 1e-12);
                let t = y as f64;
                -(t * p.ln() + (1.0 - t) * (1.0 - p).ln())
            })
            .sum::<f64>()
            / m
    }

    /// Analytic gradient: `(1/M) X^T (p - t)` for the weights, the mean
    /// residual for the bias.
    pub fn loss_and_gradient(&self, set: &LabeledSet) -> (f64, Vec<f64>, f64) {
        let m = set.n_rows() as f64;
        let mut grad_w = vec![0.0; self.weights.len()];
        let mut grad_b = 0.0;
        let mut loss = 0.0;
        for (x, &y) in set.features.iter().zip(&set.labels) {
            let p = self.probability(x);
            let t = y as f64;
            let pc = p.clamp(1e-12, 1.0 - 1e-12);
            loss -= t * pc.ln() + (1.0 - t) * (1.0 - pc).ln();
            let r = (p - t) / m;
            for (g, &v) in grad_w.iter_mut().zip(x) {
                *g += r * v;
            }
            grad_b += r;
        }
        (loss / m, grad_w, grad_b)
    }
}

impl Learner for LogRegModel {
    fn name(&self) -> &'static str {
        "log_reg"
    }

    fn fit(&mut self, train: &LabeledSet, _seed: u64) -> Result<()> {
        if train.n_rows() == 0 {
            return Err(Error::Train(
                "logistic regression requires a non-empty training set".into(),
            ));
        }
        self.n_features = train.n_features();
        self.weights = vec![0.0; self.n_features];
        self.bias = 0.0;
        for epoch in 1..=self.epochs {
            let (loss, grad_w, grad_b) = self.loss_and_gradient(train);
            if !loss.is_finite() {
                return Err(Error::Divergence {
                    epoch,
                    message: format!("logistic regression loss became {loss}"),
                });
            }
            for (w, g) in self.weights.iter_mut().zip(&grad_w) {
                *w -= self.learning_rate * g;
            }
            self.bias -= self.learning_rate * grad_b;
        }
        Ok(())
    }

    fn predict_proba(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        check_fitted(self.n_features, self.name())?;
        check_shape(features, self.n_features, self.name())?;
        Ok(features.iter().map(|x| self.probability(x)).collect())
    }

    fn clone_unfit(&self) -> Box<dyn Learner> {
        Box::new(Self::new(self.learning_rate, self.epochs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn set(features: Vec<Vec<f64>>, labels: Vec<u8>) -> LabeledSet {
        let d = features[0].len();
        LabeledSet::new(
            features,
            labels,
            (0..d).map(|j| format!("f{j}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn zero_weights_predict_half() {
        let mut m = LogRegModel::new(0.1, 0);
        m.n_features = 2;
        m.weights = vec![0.0, 0.0];
        let p = m.predict_proba(&[vec![5.0, -3.0]]).unwrap();
        assert_eq!(p, vec![0.5]);
    }

    #[test]
    fn separated_clusters_reach_perfect_accuracy() {
        let mut rng = SeededRng::new(2);
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..30 {
            features.push(vec![-2.0 + 0.3 * rng.normal()]);
            labels.push(0);
            features.push(vec![2.0 + 0.3 * rng.normal()]);
            labels.push(1);
        }
        let train = set(features, labels);
        let mut m = LogRegModel::new(0.1, 200);
        m.fit(&train, 0).unwrap();
        let preds = m.predict(&train.features).unwrap();
        assert_eq!(preds, train.labels);
    }

    #[test]
    fn loss_vanishes_on_perfect_predictions() {
        // Drive the model toward saturated correct outputs by hand.
        let train = set(vec![vec![-4.0], vec![4.0]], vec![0, 1]);
        let mut m = LogRegModel::new(0.0, 0);
        m.n_features = 1;
        m.weights = vec![10.0];
        m.bias = 0.0;
        assert!(m.loss(&train) < 1e-12);
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let mut rng = SeededRng::new(8);
        for trial in 0..5 {
            let features: Vec<Vec<f64>> = (0..5)
                .map(|_| (0..3).map(|_| rng.normal()).collect())
                .collect();
            let labels: Vec<u8> = (0..5).map(|_| (rng.uniform() < 0.5) as u8).collect();
            let data = set(features, labels);
            let mut m = LogRegModel::new(0.1, 0);
            m.n_features = 3;
            m.weights = (0..3).map(|_| rng.normal()).collect();
            m.bias = rng.normal();
            let (_, grad_w, grad_b) = m.loss_and_gradient(&data);

            let h = 1e-5;
            let mut numeric = Vec::new();
            for i in 0..3 {
                let mut plus = m.clone();
                plus.weights[i] += h;
                let mut minus = m.clone();
                minus.weights[i] -= h;
                numeric.push((plus.loss(&data) - minus.loss(&data)) / (2.0 * h));
            }
            let mut plus = m.clone();
            plus.bias += h;
            let mut minus = m.clone();
            minus.bias -= h;
            let numeric_b = (plus.loss(&data) - minus.loss(&data)) / (2.0 * h);

            for (a, n) in grad_w.iter().zip(&numeric).chain([(&grad_b, &numeric_b)]) {
                let denom = a.abs().max(n.abs()).max(1e-8);
                assert!(
                    ((a - n) / denom).abs() < 1e-4,
                    "trial {trial}: analytic {a} vs numeric {n}"
                );
            }
        }
    }
}
