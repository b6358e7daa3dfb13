//! Model file format: versioned JSON documents with parameter arrays
//! stored as decimal text at 17 significant digits, which round-trips
//! every finite `f64` exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::{BaseLearner, Learner};
use crate::stacking::StackingModel;

pub const MODEL_FORMAT_VERSION: u32 = 1;

pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>()
        .map_err(|e| format!("invalid decimal parameter {s:?}: {e}"))
}

/// Serde adapter: `f64` as 17-significant-digit decimal text.
pub mod dec17_scalar {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_f64(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_f64(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: `Vec<f64>` as decimal text.
pub mod dec17 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|&x| super::format_f64(x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| super::parse_f64(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter: `Vec<Vec<f64>>` as decimal text.
pub mod dec17_matrix {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(
            xs.iter()
                .map(|row| row.iter().map(|&x| super::format_f64(x)).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<f64>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|row| {
                row.iter()
                    .map(|s| super::parse_f64(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Any model a file can hold: a single learner or a stacked ensemble.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyModel {
    Stacking(StackingModel),
    Base(BaseLearner),
}

impl AnyModel {
    pub fn predict_proba(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        match self {
            AnyModel::Stacking(m) => m.predict_proba(features),
            AnyModel::Base(m) => m.predict_proba(features),
        }
    }

    pub fn predict(&self, features: &[Vec<f64>]) -> Result<Vec<u8>> {
        Ok(self
            .predict_proba(features)?
            .into_iter()
            .map(|p| u8::from(p >= 0.5))
            .collect())
    }

    pub fn n_features(&self) -> usize {
        match self {
            AnyModel::Stacking(m) => m.n_features(),
            AnyModel::Base(m) => base_n_features(m),
        }
    }
}

pub(crate) fn base_n_features(model: &BaseLearner) -> usize {
    match model {
        BaseLearner::Knn(m) => m.n_features,
        BaseLearner::Svm(m) => m.n_features,
        BaseLearner::Mlp(m) => m.n_features,
        BaseLearner::AdaBoost(m) => m.n_features,
        BaseLearner::LogReg(m) => m.n_features,
        BaseLearner::NaiveBayes(m) => m.n_features,
        BaseLearner::GradBoost(m) => m.n_features,
    }
}

/// On-disk envelope around a model document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    #[serde(flatten)]
    pub model: AnyModel,
}

pub fn to_json(model: &AnyModel) -> Result<String> {
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        model: model.clone(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn from_json(text: &str) -> Result<AnyModel> {
    let file: ModelFile = serde_json::from_str(text)?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::Schema(format!(
            "unsupported model format_version {}",
            file.format_version
        )));
    }
    Ok(file.model)
}

pub fn save_model(model: &AnyModel, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(model)?)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<AnyModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read model {}: {e}", path.display())))?;
    from_json(&text)
}
