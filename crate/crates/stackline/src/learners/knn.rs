//! k-nearest-neighbors with Euclidean distance.

use serde::{Deserialize, Serialize};

use super::{check_fitted, check_shape, Learner};
use crate::dataset::LabeledSet;
use crate::error::{Error, Result};
use crate::model_io::dec17_matrix;

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Memory-based classifier: the probability for a query is the positive
/// fraction among its `k` nearest training rows. Distance ties break
/// toward the lower training-row index.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    #[serde(with = "dec17_matrix")]
    pub train_features: Vec<Vec<f64>>,
    pub train_labels: Vec<u8>,
    #[serde(default)]
    pub n_features: usize,
}

impl KnnModel {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            train_features: Vec::new(),
            train_labels: Vec::new(),
            n_features: 0,
        }
    }
}

impl Learner for KnnModel {
    fn name(&self) -> &'static str {
        "knn"
    }

    fn fit(&mut self, train: &LabeledSet, _seed: u64) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("knn requires k >= 1".into()));
        }
        if train.n_rows() == 0 {
            return Err(Error::Train("knn requires a non-empty training set".into()));
        }
        // k is capped at the number of stored rows.
        self.k = self.k.min(train.n_rows());
        self.train_features = train.features.clone();
        self.train_labels = train.labels.clone();
        self.n_features = train.n_features();
        Ok(())
    }

    fn predict_proba(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        check_fitted(self.n_features, self.name())?;
        check_shape(features, self.n_features, self.name())?;
        let mut out = Vec::with_capacity(features.len());
        for query in features {
            let mut dist: Vec<(f64, usize)> = self
                .train_features
                .iter()
                .enumerate()
                .map(|(i, row)| (euclidean_distance(query, row), i))
                .collect();
            dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let positives = dist[..self.k]
                .iter()
                .filter(|&&(_, i)| self.train_labels[i] == 1)
                .count();
            out.push(positives as f64 / self.k as f64);
        }
        Ok(out)
    }

    fn clone_unfit(&self) -> Box<dyn Learner> {
        Box::new(Self::new(self.k))
    }
}
