//! The single JSON configuration that drives every pipeline stage, plus
//! dotted-path overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::SplitSpec;
use crate::error::{Error, Result};
use crate::learners::{
    AdaBoostModel, BaseLearner, GradBoostModel, KnnModel, LogRegModel, MlpModel,
    NaiveBayesModel, SvmModel,
};
use crate::preprocess::PreprocessConfig;
use crate::stacking::StackingConfig;
use crate::synth::SynthConfig;

/// Hyperparameters for every learner, all overridable from the config
/// file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnerParams {
    pub knn_k: usize,
    pub svm_lambda: f64,
    pub svm_epochs: usize,
    pub mlp_hidden_units: usize,
    pub mlp_learning_rate: f64,
    pub mlp_epochs: usize,
    pub adaboost_rounds: usize,
    pub logreg_learning_rate: f64,
    pub logreg_epochs: usize,
    /// Meta-learner settings; the meta problem is tiny (one input per
    /// base learner), so it affords a hotter schedule than the logistic
    /// regression baseline.
    pub meta_learning_rate: f64,
    pub meta_epochs: usize,
    pub gradboost_rounds: usize,
    pub gradboost_shrinkage: f64,
}

impl Default for LearnerParams {
    fn default() -> Self {
        Self {
            knn_k: 5,
            svm_lambda: 0.01,
            svm_epochs: 100,
            mlp_hidden_units: 16,
            mlp_learning_rate: 0.05,
            mlp_epochs: 500,
            adaboost_rounds: 50,
            logreg_learning_rate: 0.1,
            logreg_epochs: 1000,
            meta_learning_rate: 1.0,
            meta_epochs: 5000,
            gradboost_rounds: 100,
            gradboost_shrinkage: 0.1,
        }
    }
}

impl LearnerParams {
    /// Unfitted learner instance for a configured name.
    pub fn build(&self, name: &str) -> Result<BaseLearner> {
        Ok(match name {
            "knn" => BaseLearner::Knn(KnnModel::new(self.knn_k)),
            "svm" => BaseLearner::Svm(SvmModel::new(self.svm_lambda, self.svm_epochs)),
            "mlp" => BaseLearner::Mlp(MlpModel::new(
                self.mlp_hidden_units,
                self.mlp_learning_rate,
                self.mlp_epochs,
            )),
            "adaboost" => BaseLearner::AdaBoost(AdaBoostModel::new(self.adaboost_rounds)),
            "logreg" | "log_reg" => BaseLearner::LogReg(LogRegModel::new(
                self.logreg_learning_rate,
                self.logreg_epochs,
            )),
            "naive_bayes" => BaseLearner::NaiveBayes(NaiveBayesModel::new()),
            "gradboost" | "grad_boost" => BaseLearner::GradBoost(GradBoostModel::new(
                self.gradboost_rounds,
                self.gradboost_shrinkage,
            )),
            other => {
                return Err(Error::Config(format!(
                    "unknown learner {other:?} (expected one of knn, svm, mlp, adaboost, \
                     logreg, naive_bayes, gradboost)"
                )))
            }
        })
    }

    pub fn meta_learner(&self) -> LogRegModel {
        LogRegModel::new(self.meta_learning_rate, self.meta_epochs)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Input CSV path; `synth` writes here, the other stages read it.
    pub input: PathBuf,
    pub target: String,
    pub output_dir: PathBuf,
    /// Master seed; per-stage seeds derive from it (split uses its own
    /// seed field, balancing uses `seed + 1`, stacking its `seed` field).
    pub seed: u64,
    /// Column-kind overrides applied when reading the input CSV
    /// (values: "numeric" | "categorical").
    pub schema_overrides: BTreeMap<String, String>,
    pub preprocess: PreprocessConfig,
    pub split: SplitSpec,
    /// Chi-square significance threshold.
    pub alpha: f64,
    pub stacking: StackingConfig,
    pub learners: LearnerParams,
    pub synth: SynthConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: PathBuf::from("data.csv"),
            target: "Depression".into(),
            output_dir: PathBuf::from("out"),
            seed: 42,
            schema_overrides: BTreeMap::new(),
            preprocess: PreprocessConfig::default(),
            split: SplitSpec::default(),
            alpha: 0.05,
            stacking: StackingConfig::default(),
            learners: LearnerParams::default(),
            synth: SynthConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("config is not valid JSON: {e}")))?;
        Self::from_value(value)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        serde_json::from_value(value)
            .map_err(|e| Error::Config(format!("invalid config: {e}")))
    }

    /// Applies `--set path.to.field=value` overrides onto the JSON form.
    pub fn apply_overrides(value: &mut serde_json::Value, overrides: &[String]) -> Result<()> {
        for entry in overrides {
            let (path, raw) = entry.split_once('=').ok_or_else(|| {
                Error::Config(format!("override {entry:?} is not of the form path=value"))
            })?;
            let parsed: serde_json::Value = serde_json::from_str(raw)
                .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
            let mut cursor = &mut *value;
            let segments: Vec<&str> = path.split('.').collect();
            for (i, segment) in segments.iter().enumerate() {
                if !cursor.is_object() {
                    return Err(Error::Config(format!(
                        "override path {path:?} does not address an object"
                    )));
                }
                let map = cursor.as_object_mut().expect("checked above");
                if i + 1 == segments.len() {
                    map.insert((*segment).to_string(), parsed.clone());
                    break;
                }
                cursor = map
                    .entry((*segment).to_string())
                    .or_insert_with(|| serde_json::Value::Object(Default::default()));
            }
        }
        Ok(())
    }

    /// Content hash over the canonical JSON form.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let hash = Sha256::digest(canonical.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn schema_hint(&self) -> Result<Vec<(String, crate::frame::ColumnKind)>> {
        self.schema_overrides
            .iter()
            .map(|(name, kind)| {
                let kind = match kind.as_str() {
                    "numeric" => crate::frame::ColumnKind::Numeric,
                    "categorical" => crate::frame::ColumnKind::Categorical,
                    other => {
                        return Err(Error::Config(format!(
                            "schema override for {name:?} must be numeric or categorical, \
                             got {other:?}"
                        )))
                    }
                };
                Ok((name.clone(), kind))
            })
            .collect()
    }

    /// Seed used for balancing the training split.
    pub fn balance_seed(&self) -> u64 {
        self.seed.wrapping_add(1)
    }
}
