//! Gaussian naive Bayes with a variance floor.

use serde::{Deserialize, Serialize};

use super::{check_fitted, check_shape, sigmoid, Learner};
use crate::dataset::LabeledSet;
use crate::error::{Error, Result};
use crate::model_io::dec17;

const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    #[serde(with = "dec17")]
    pub log_priors: Vec<f64>, // [class 0, class 1]
    #[serde(with = "crate::model_io::dec17_matrix")]
    pub means: Vec<Vec<f64>>, // [class][feature]
    #[serde(with = "crate::model_io::dec17_matrix")]
    pub variances: Vec<Vec<f64>>,
    #[serde(default)]
    pub n_features: usize,
}

impl NaiveBayesModel {
    #[allow(clippy::new_without_default)]
    pub fn new() -> Self {
        Self {
            log_priors: Vec::new(),
            means: Vec::new(),
            variances: Vec::new(),
            n_features: 0,
        }
    }

    fn log_likelihood(&self, x: &[f64], class: usize) -> f64 {
        let mut ll = self.log_priors[class];
        for ((&v, &mu), &var) in x
            .iter()
            .zip(&self.means[class])
            .zip(&self.variances[class])
        {
            ll -= 0.5 * (std::f64::consts::TAU * var).ln();
            ll -= (v - mu) * (v - mu) / (2.0 * var);
        }
        ll
    }
}

impl Learner for NaiveBayesModel {
    fn name(&self) -> &'static str {
        "naive_bayes"
    }

    fn fit(&mut self, train: &LabeledSet, _seed: u64) -> Result<()> {
        let n = train.n_rows();
        let n_pos = train.positives();
        if n_pos == 0 || n_pos == n {
            return Err(Error::Train(
                "naive bayes requires both classes present".into(),
            ));
        }
        let d = train.n_features();
        let mut means = vec![vec![0.0; d]; 2];
        let mut counts = [0usize; 2];
        for (x, &y) in train.features.iter().zip(&train.labels) {
            counts[y as usize] += 1;
            for (m, &v) in means[y as usize].iter_mut().zip(x) {
                *m += v;
            }
        }
        for (class, count) in counts.iter().enumerate() {
            for m in &mut means[class] {
                *m /= *count as f64;
            }
        }
        let mut variances = vec![vec![0.0; d]; 2];
        for (x, &y) in train.features.iter().zip(&train.labels) {
            for ((s, &v), &mu) in variances[y as usize]
                .iter_mut()
                .zip(x)
                .zip(&means[y as usize])
            {
                *s += (v - mu) * (v - mu);
            }
        }
        for (class, count) in counts.iter().enumerate() {
            for s in &mut variances[class] {
                *s = (*s / *count as f64).max(VARIANCE_FLOOR);
            }
        }
        self.log_priors = counts
            .iter()
            .map(|&c| (c as f64 / n as f64).ln())
            .collect();
        self.means = means;
        self.variances = variances;
        self.n_features = d;
        Ok(())
    }

    fn predict_proba(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        check_fitted(self.n_features, self.name())?;
        check_shape(features, self.n_features, self.name())?;
        Ok(features
            .iter()
            .map(|x| sigmoid(self.log_likelihood(x, 1) - self.log_likelihood(x, 0)))
            .collect())
    }

    fn clone_unfit(&self) -> Box<dyn Learner> {
        Box::new(Self::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn blob_set(seed: u64, n_per_class: usize, separation: f64) -> LabeledSet {
        let mut rng = SeededRng::new(seed);
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..n_per_class {
            features.push(vec![rng.normal(), rng.normal()]);
            labels.push(0);
            features.push(vec![
                separation + rng.normal(),
                separation + rng.normal(),
            ]);
            labels.push(1);
        }
        LabeledSet::new(features, labels, vec!["a".into(), "b".into()]).unwrap()
    }

    #[test]
    fn well_separated_blobs_classify_almost_perfectly() {
        let mut correct = 0usize;
        let mut total = 0usize;
        for seed in 0..5 {
            let train = blob_set(seed, 200, 8.0);
            let mut m = NaiveBayesModel::new();
            m.fit(&train, 0).unwrap();
            let preds = m.predict(&train.features).unwrap();
            correct += preds
                .iter()
                .zip(&train.labels)
                .filter(|(p, y)| p == y)
                .count();
            total += preds.len();
        }
        let accuracy = correct as f64 / total as f64;
        assert!(accuracy >= 0.99, "accuracy {accuracy}");
    }

    #[test]
    fn same_mean_classes_predict_near_half() {
        let mut rng = SeededRng::new(5);
        let features: Vec<Vec<f64>> = (0..400).map(|_| vec![rng.normal()]).collect();
        let labels: Vec<u8> = (0..400).map(|i| (i % 2) as u8).collect();
        let train = LabeledSet::new(features, labels, vec!["x".into()]).unwrap();
        let mut m = NaiveBayesModel::new();
        m.fit(&train, 0).unwrap();
        let p = m.predict_proba(&[vec![0.0]]).unwrap()[0];
        assert!((p - 0.5).abs() <= 0.05, "p = {p}");
    }

    #[test]
    fn single_class_is_training_error() {
        let train = LabeledSet::new(
            vec![vec![1.0], vec![2.0]],
            vec![1, 1],
            vec!["x".into()],
        )
        .unwrap();
        let mut m = NaiveBayesModel::new();
        assert!(matches!(m.fit(&train, 0), Err(Error::Train(_))));
    }

    #[test]
    fn variance_floor_prevents_degenerate_likelihoods() {
        // One feature constant within each class.
        let train = LabeledSet::new(
            vec![vec![0.0], vec![0.0], vec![1.0], vec![1.0]],
            vec![0, 0, 1, 1],
            vec!["x".into()],
        )
        .unwrap();
        let mut m = NaiveBayesModel::new();
        m.fit(&train, 0).unwrap();
        let p = m.predict_proba(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(p[0] < 0.5 && p[1] > 0.5);
        assert!(p.iter().all(|v| v.is_finite()));
    }
}
