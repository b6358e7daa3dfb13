//! The shared classifier contract and the seven concrete learners.

mod adaboost;
mod gradboost;
mod knn;
mod logreg;
mod mlp;
mod naive_bayes;
mod platt;
mod svm;

pub use adaboost::{round_weight, AdaBoostModel, BoostAudit, Stump};
pub use gradboost::GradBoostModel;
pub use knn::{euclidean_distance, KnnModel};
pub use logreg::LogRegModel;
pub use mlp::MlpModel;
pub use naive_bayes::NaiveBayesModel;
pub use platt::PlattCalibration;
pub use svm::{SvmAudit, SvmModel};

use serde::{Deserialize, Serialize};

use crate::dataset::LabeledSet;
use crate::error::{Error, Result};

/// Numerically stable logistic function.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Contract shared by every classifier.
///
/// `fit` must be deterministic given the seed; a fitted model never
/// mutates afterwards, so predictions are reentrant. `predict` is the
/// 0.5 threshold over `predict_proba` for every implementation.
pub trait Learner: Send + Sync {
    fn name(&self) -> &'static str;

    fn fit(&mut self, train: &LabeledSet, seed: u64) -> Result<()>;

    /// Positive-class probability per row, each in [0, 1].
    fn predict_proba(&self, features: &[Vec<f64>]) -> Result<Vec<f64>>;

    /// Hard labels: 1 iff the probability is at least 0.5.
    fn predict(&self, features: &[Vec<f64>]) -> Result<Vec<u8>> {
        Ok(self
            .predict_proba(features)?
            .into_iter()
            .map(|p| u8::from(p >= 0.5))
            .collect())
    }

    /// Fresh unfitted copy carrying the same hyperparameters.
    fn clone_unfit(&self) -> Box<dyn Learner>;
}

pub(crate) fn check_fitted(n_features: usize, name: &str) -> Result<()> {
    if n_features == 0 {
        return Err(Error::Train(format!("{name} model is not fitted")));
    }
    Ok(())
}

pub(crate) fn check_shape(rows: &[Vec<f64>], n_features: usize, name: &str) -> Result<()> {
    if let Some(row) = rows.iter().find(|r| r.len() != n_features) {
        return Err(Error::Shape(format!(
            "{name} expects {n_features} features, got a row with {}",
            row.len()
        )));
    }
    Ok(())
}

/// Concrete model behind a serializable tag; this is what model files and
/// stacked ensembles embed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum BaseLearner {
    Knn(KnnModel),
    Svm(SvmModel),
    Mlp(MlpModel),
    AdaBoost(AdaBoostModel),
    LogReg(LogRegModel),
    NaiveBayes(NaiveBayesModel),
    GradBoost(GradBoostModel),
}

impl BaseLearner {
    fn as_learner(&self) -> &dyn Learner {
        match self {
            BaseLearner::Knn(m) => m,
            BaseLearner::Svm(m) => m,
            BaseLearner::Mlp(m) => m,
            BaseLearner::AdaBoost(m) => m,
            BaseLearner::LogReg(m) => m,
            BaseLearner::NaiveBayes(m) => m,
            BaseLearner::GradBoost(m) => m,
        }
    }

    fn as_learner_mut(&mut self) -> &mut dyn Learner {
        match self {
            BaseLearner::Knn(m) => m,
            BaseLearner::Svm(m) => m,
            BaseLearner::Mlp(m) => m,
            BaseLearner::AdaBoost(m) => m,
            BaseLearner::LogReg(m) => m,
            BaseLearner::NaiveBayes(m) => m,
            BaseLearner::GradBoost(m) => m,
        }
    }
}

impl Learner for BaseLearner {
    fn name(&self) -> &'static str {
        self.as_learner().name()
    }

    fn fit(&mut self, train: &LabeledSet, seed: u64) -> Result<()> {
        self.as_learner_mut().fit(train, seed)
    }

    fn predict_proba(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        self.as_learner().predict_proba(features)
    }

    fn clone_unfit(&self) -> Box<dyn Learner> {
        self.as_learner().clone_unfit()
    }
}
