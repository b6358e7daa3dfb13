//! Stackline: a from-scratch tabular binary-classification toolkit.
//!
//! The pipeline mirrors a survey-based depression-risk study: CSV
//! ingestion into a typed [`frame::Frame`], cleaning and train-fitted
//! encoding ([`preprocess`]), chi-square feature selection ([`chi2`]),
//! seven classifiers sharing one contract ([`learners`]), a stacked
//! ensemble with a logistic-regression meta-learner ([`stacking`]), and
//! an evaluation suite ([`metrics`]). [`synth`] generates seeded
//! look-alike datasets so everything runs and tests without the original
//! survey data; [`pipeline`] wires the stages behind the `stackline` CLI.
//!
//! Every stochastic step takes an explicit seed (ChaCha8 underneath, see
//! [`rng`]), so identical configurations reproduce identical artifacts
//! byte for byte.

pub mod chi2;
pub mod config;
pub mod dataset;
pub mod error;
pub mod frame;
pub mod gamma;
pub mod learners;
pub mod metrics;
pub mod model_io;
pub mod pipeline;
pub mod plot;
pub mod preprocess;
pub mod rng;
pub mod stacking;
pub mod synth;
pub mod util;

pub use error::{Error, Result};
