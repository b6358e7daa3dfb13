//! Single-hidden-layer perceptron, sigmoid activations throughout,
//! trained by full-batch gradient descent on binary cross-entropy.

use serde::{Deserialize, Serialize};

use super::{check_fitted, check_shape, sigmoid, Learner};
use crate::dataset::LabeledSet;
use crate::error::{Error, Result};
use crate::model_io::{dec17, dec17_matrix, dec17_scalar};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MlpModel {
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    /// Hidden weights, one row per hidden unit.
    #[serde(with = "dec17_matrix")]
    pub hidden_weights: Vec<Vec<f64>>,
    #[serde(with = "dec17")]
    pub hidden_biases: Vec<f64>,
    #[serde(with = "dec17")]
    pub output_weights: Vec<f64>,
    #[serde(with = "dec17_scalar")]
    pub output_bias: f64,
    #[serde(default)]
    pub n_features: usize,
    /// Training loss after the final epoch.
    #[serde(default, with = "dec17_scalar")]
    pub final_loss: f64,
}

/// Gradient of the loss with respect to every parameter, in the same
/// layout as the model fields.
#[derive(Debug, Clone)]
pub struct MlpGradient {
    pub hidden_weights: Vec<Vec<f64>>,
    pub hidden_biases: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
}

impl MlpModel {
    pub fn new(hidden_units: usize, learning_rate: f64, epochs: usize) -> Self {
        Self {
            hidden_units,
            learning_rate,
            epochs,
            hidden_weights: Vec::new(),
            hidden_biases: Vec::new(),
            output_weights: Vec::new(),
            output_bias: 0.0,
            n_features: 0,
            final_loss: 0.0,
        }
    }

    fn forward(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let hidden: Vec<f64> = self
            .hidden_weights
            .iter()
            .zip(&self.hidden_biases)
            .map(|(w, b)| sigmoid(w.iter().zip(x).map(|(wi, xi)| wi * xi).sum::<f64>() + b))
            .collect();
        let out = sigmoid(
            self.output_weights
                .iter()
                .zip(&hidden)
                .map(|(w, h)| w * h)
                .sum::<f64>()
                + self.output_bias,
        );
        (hidden, out)
    }

    /// Mean binary cross-entropy over the batch.
    pub fn loss(&self, set: &LabeledSet) -> f64 {
        let m = set.n_rows() as f64;
        set.features
            .iter()
            .zip(&set.labels)
            .map(|(x, &y)| {
                let (_, p) = self.forward(x);
                let p = p.clamp(1e-12, 1.0 - 1e-12);
                let t = y as f64;
                -(t * p.ln() + (1.0 - t) * (1.0 - p).ln())
            })
            .sum::<f64>()
            / m
    }

    /// Analytic loss and gradient over the full batch; backpropagation
    /// through the two sigmoid layers.
    pub fn loss_and_gradient(&self, set: &LabeledSet) -> (f64, MlpGradient) {
        let m = set.n_rows() as f64;
        let d = self.n_features;
        let h = self.hidden_units;
        let mut grad = MlpGradient {
            hidden_weights: vec![vec![0.0; d]; h],
            hidden_biases: vec![0.0; h],
            output_weights: vec![0.0; h],
            output_bias: 0.0,
        };
        let mut loss = 0.0;
        for (x, &y) in set.features.iter().zip(&set.labels) {
            let (hidden, p) = self.forward(x);
            let t = y as f64;
            let pc = p.clamp(1e-12, 1.0 - 1e-12);
            loss -= t * pc.ln() + (1.0 - t) * (1.0 - pc).ln();
            // d(loss)/d(pre-activation of output) for BCE + sigmoid.
            let delta_out = (p - t) / m;
            for (g, hv) in grad.output_weights.iter_mut().zip(&hidden) {
                *g += delta_out * hv;
            }
            grad.output_bias += delta_out;
            for (k, &hk) in hidden.iter().enumerate() {
                let delta_h = delta_out * self.output_weights[k] * hk * (1.0 - hk);
                grad.hidden_biases[k] += delta_h;
                for (g, &xv) in grad.hidden_weights[k].iter_mut().zip(x) {
                    *g += delta_h * xv;
                }
            }
        }
        (loss / m, grad)
    }

    /// All parameters flattened: hidden weights row-major, hidden biases,
    /// output weights, output bias. Used by the finite-difference checks.
    pub fn params_flat(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.hidden_weights.iter().flatten().copied().collect();
        v.extend(&self.hidden_biases);
        v.extend(&self.output_weights);
        v.push(self.output_bias);
        v
    }

    pub fn set_params_flat(&mut self, params: &[f64]) {
        let mut it = params.iter().copied();
        for row in &mut self.hidden_weights {
            for w in row.iter_mut() {
                *w = it.next().expect("parameter count");
            }
        }
        for b in &mut self.hidden_biases {
            *b = it.next().expect("parameter count");
        }
        for w in &mut self.output_weights {
            *w = it.next().expect("parameter count");
        }
        self.output_bias = it.next().expect("parameter count");
        assert!(it.next().is_none(), "parameter count");
    }

    /// Initializes weights from seeded uniform(-0.5, 0.5) draws; biases
    /// start at zero.
    pub fn initialize(&mut self, n_features: usize, seed: u64) {
        let mut rng = SeededRng::new(seed);
        self.n_features = n_features;
        self.hidden_weights = (0..self.hidden_units)
            .map(|_| {
                (0..n_features)
                    .map(|_| rng.uniform_range(-0.5, 0.5))
                    .collect()
            })
            .collect();
        self.hidden_biases = vec![0.0; self.hidden_units];
        self.output_weights = (0..self.hidden_units)
            .map(|_| rng.uniform_range(-0.5, 0.5))
            .collect();
        self.output_bias = 0.0;
    }
}

impl Learner for MlpModel {
    fn name(&self) -> &'static str {
        "mlp"
    }

    fn fit(&mut self, train: &LabeledSet, seed: u64) -> Result<()> {
        if self.hidden_units == 0 {
            return Err(Error::Config("mlp requires at least one hidden unit".into()));
        }
        if train.n_rows() == 0 {
            return Err(Error::Train("mlp requires a non-empty training set".into()));
        }
        self.initialize(train.n_features(), seed);
        for epoch in 1..=self.epochs {
            let (loss, grad) = self.loss_and_gradient(train);
            if !loss.is_finite() {
                return Err(Error::Divergence {
                    epoch,
                    message: format!("mlp loss became {loss}"),
                });
            }
            let lr = self.learning_rate;
            for (row, grow) in self.hidden_weights.iter_mut().zip(&grad.hidden_weights) {
                for (w, g) in row.iter_mut().zip(grow) {
                    *w -= lr * g;
                }
            }
            for (b, g) in self.hidden_biases.iter_mut().zip(&grad.hidden_biases) {
                *b -= lr * g;
            }
            for (w, g) in self.output_weights.iter_mut().zip(&grad.output_weights) {
                *w -= lr * g;
            }
            self.output_bias -= lr * grad.output_bias;
        }
        self.final_loss = self.loss(train);
        if !self.final_loss.is_finite() {
            return Err(Error::Divergence {
                epoch: self.epochs,
                message: format!("mlp final loss is {}", self.final_loss),
            });
        }
        Ok(())
    }

    fn predict_proba(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        check_fitted(self.n_features, self.name())?;
        check_shape(features, self.n_features, self.name())?;
        Ok(features.iter().map(|x| self.forward(x).1).collect())
    }

    fn clone_unfit(&self) -> Box<dyn Learner> {
        Box::new(Self::new(self.hidden_units, self.learning_rate, self.epochs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(features: Vec<Vec<f64>>, labels: Vec<u8>) -> LabeledSet {
        let d = features[0].len();
        LabeledSet::new(
            features,
            labels,
            (0..d).map(|j| format!("f{j}")).collect(),
        )
        .unwrap()
    }

    fn xor_set() -> LabeledSet {
        set(
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
            ],
            vec![0, 1, 1, 0],
        )
    }

    #[test]
    fn zero_weights_output_half() {
        let mut m = MlpModel::new(4, 0.1, 0);
        m.initialize(3, 0);
        let zeros = vec![0.0; m.params_flat().len()];
        m.set_params_flat(&zeros);
        let p = m
            .predict_proba(&[vec![1.0, -2.0, 3.0], vec![0.0, 0.0, 0.0]])
            .unwrap();
        assert_eq!(p, vec![0.5, 0.5]);
    }

    #[test]
    fn xor_reaches_perfect_training_accuracy() {
        let train = xor_set();
        let mut m = MlpModel::new(16, 2.0, 5000);
        m.fit(&train, 3).unwrap();
        assert_eq!(m.predict(&train.features).unwrap(), vec![0, 1, 1, 0]);
        assert!(m.final_loss < 0.3, "final loss {}", m.final_loss);
    }

    /// Central finite differences over the flattened parameters.
    fn numeric_gradient(model: &MlpModel, set: &LabeledSet, h: f64) -> Vec<f64> {
        let base = model.params_flat();
        let mut grad = Vec::with_capacity(base.len());
        for i in 0..base.len() {
            let mut plus = model.clone();
            let mut params = base.clone();
            params[i] += h;
            plus.set_params_flat(&params);
            let mut minus = model.clone();
            params[i] -= 2.0 * h;
            minus.set_params_flat(&params);
            grad.push((plus.loss(set) - minus.loss(set)) / (2.0 * h));
        }
        grad
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let mut rng = crate::rng::SeededRng::new(41);
        for trial in 0..5 {
            let features: Vec<Vec<f64>> = (0..5)
                .map(|_| (0..3).map(|_| rng.normal()).collect())
                .collect();
            let labels: Vec<u8> = (0..5).map(|_| (rng.uniform() < 0.5) as u8).collect();
            let data = set(features, labels);
            let mut m = MlpModel::new(4, 0.1, 0);
            m.initialize(3, 100 + trial);
            let (_, analytic) = m.loss_and_gradient(&data);
            let mut flat = Vec::new();
            for row in &analytic.hidden_weights {
                flat.extend(row);
            }
            flat.extend(&analytic.hidden_biases);
            flat.extend(&analytic.output_weights);
            flat.push(analytic.output_bias);

            let numeric = numeric_gradient(&m, &data, 1e-5);
            for (a, n) in flat.iter().zip(&numeric) {
                let denom = a.abs().max(n.abs()).max(1e-8);
                assert!(
                    ((a - n) / denom).abs() < 1e-4,
                    "trial {trial}: analytic {a} vs numeric {n}"
                );
            }
        }
    }

    #[test]
    fn empty_hidden_layer_is_config_error() {
        let train = xor_set();
        let mut m = MlpModel::new(0, 0.1, 10);
        assert!(matches!(m.fit(&train, 0), Err(Error::Config(_))));
    }
}
