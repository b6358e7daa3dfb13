//! Stacked generalization: out-of-fold base-learner probabilities feed a
//! logistic-regression meta-learner.
//!
//! The out-of-fold construction is leakage-free by design: meta-feature
//! cell `(i, r)` always comes from a copy of learner `r` fitted without
//! row `i`. Fold x learner fits derive their seeds as
//! `seed + learner_index * 1000 + fold_index` (the full-train refit uses
//! fold index `n_folds`), so parallel and serial runs coincide
//! bit for bit.

use serde::{Deserialize, Serialize};

use crate::dataset::LabeledSet;
use crate::error::{Error, Result};
use crate::learners::{BaseLearner, Learner, LogRegModel};
use crate::rng::SeededRng;
use crate::util::run_tasks;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct StackingConfig {
    /// Base learner names in meta-feature column order.
    pub base_learners: Vec<String>,
    pub n_folds: usize,
    pub seed: u64,
}

impl Default for StackingConfig {
    fn default() -> Self {
        Self {
            base_learners: vec![
                "knn".into(),
                "svm".into(),
                "mlp".into(),
                "adaboost".into(),
            ],
            n_folds: 5,
            seed: 42,
        }
    }
}

impl StackingConfig {
    /// Content hash of the canonical JSON form, embedded in serialized
    /// models so a file can be traced back to its configuration.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn validate(&self, n_train: usize) -> Result<()> {
        if self.base_learners.len() < 2 {
            return Err(Error::Config(format!(
                "stacking requires at least 2 base learners, got {}",
                self.base_learners.len()
            )));
        }
        if self.n_folds < 2 || self.n_folds > n_train {
            return Err(Error::Config(format!(
                "n_folds = {} outside [2, {n_train}]",
                self.n_folds
            )));
        }
        Ok(())
    }
}

/// Per-row fold assignment: a seeded shuffle within each class dealt
/// round-robin, so every fold keeps the class ratio. Errors when any fold
/// would miss a class.
pub fn stratified_folds(labels: &[u8], n_folds: usize, seed: u64) -> Result<Vec<usize>> {
    let mut rng = SeededRng::new(seed);
    let mut assignment = vec![0usize; labels.len()];
    for class in [1u8, 0] {
        let mut rows: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if rows.len() < n_folds {
            return Err(Error::Stratification(format!(
                "class {class} has {} rows, fewer than {n_folds} folds",
                rows.len()
            )));
        }
        rng.shuffle(&mut rows);
        for (pos, row) in rows.into_iter().enumerate() {
            assignment[row] = pos % n_folds;
        }
    }
    Ok(assignment)
}

/// Out-of-fold probability matrix plus the fold assignment that produced
/// it.
#[derive(Debug, Clone)]
pub struct MetaFeatures {
    /// Row-major, one row per training row, one column per base learner.
    pub matrix: Vec<Vec<f64>>,
    pub fold_assignment: Vec<usize>,
}

/// Builds the out-of-fold meta-feature matrix.
///
/// For each fold `f` and prototype `r`, a fresh copy of the prototype is
/// fitted on every row outside `f` (seed `seed + r * 1000 + f`) and
/// predicts the rows inside `f`; no learner ever predicts a row it
/// trained on.
pub fn build_meta_features(
    train: &LabeledSet,
    prototypes: &[Box<dyn Learner>],
    n_folds: usize,
    seed: u64,
    threads: usize,
) -> Result<MetaFeatures> {
    if prototypes.is_empty() {
        return Err(Error::Config("no base learners given".into()));
    }
    let fold_assignment = stratified_folds(&train.labels, n_folds, seed)?;
    let fold_rows: Vec<Vec<usize>> = (0..n_folds)
        .map(|f| {
            (0..train.n_rows())
                .filter(|&i| fold_assignment[i] == f)
                .collect()
        })
        .collect();

    type FoldOutcome = Result<(usize, Vec<usize>, Vec<f64>)>;
    let mut tasks: Vec<Box<dyn FnOnce() -> FoldOutcome + Send + '_>> = Vec::new();
    for (r, proto) in prototypes.iter().enumerate() {
        for (f, rows_in_fold) in fold_rows.iter().enumerate() {
            let proto = proto.clone_unfit();
            let fold_assignment = &fold_assignment;
            tasks.push(Box::new(move || {
                let outside: Vec<usize> = (0..train.n_rows())
                    .filter(|&i| fold_assignment[i] != f)
                    .collect();
                let mut model = proto;
                let fit_seed = seed + r as u64 * 1000 + f as u64;
                model.fit(&train.select_rows(&outside), fit_seed).map_err(|e| {
                    Error::Train(format!(
                        "base learner {} failed on fold {f}: {e}",
                        model.name()
                    ))
                })?;
                let queries: Vec<Vec<f64>> = rows_in_fold
                    .iter()
                    .map(|&i| train.features[i].clone())
                    .collect();
                let probs = model.predict_proba(&queries)?;
                Ok((r, rows_in_fold.clone(), probs))
            }));
        }
    }

    let mut matrix = vec![vec![0.0; prototypes.len()]; train.n_rows()];
    for outcome in run_tasks(tasks, threads) {
        let (r, rows, probs) = outcome?;
        for (&i, &p) in rows.iter().zip(&probs) {
            debug_assert!((0.0..=1.0).contains(&p));
            matrix[i][r] = p;
        }
    }
    Ok(MetaFeatures {
        matrix,
        fold_assignment,
    })
}

/// Trained stack: refit base learners plus the meta-learner over their
/// probabilities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StackingModel {
    pub config: StackingConfig,
    pub config_digest: String,
    pub bases: Vec<BaseLearner>,
    pub meta: LogRegModel,
    /// Fold assignment used for the out-of-fold matrix, kept for audit.
    pub fold_assignment: Vec<usize>,
}

impl StackingModel {
    /// Fits the stack: out-of-fold meta-features, the meta-learner on
    /// them, then every base learner refit on the full training split.
    pub fn fit(
        train: &LabeledSet,
        cfg: &StackingConfig,
        mut bases: Vec<BaseLearner>,
        meta_template: LogRegModel,
        threads: usize,
    ) -> Result<Self> {
        cfg.validate(train.n_rows())?;
        if bases.len() != cfg.base_learners.len() {
            return Err(Error::Config(format!(
                "{} base learner instances for {} configured names",
                bases.len(),
                cfg.base_learners.len()
            )));
        }
        let prototypes: Vec<Box<dyn Learner>> =
            bases.iter().map(|b| b.clone_unfit()).collect();
        let meta_features =
            build_meta_features(train, &prototypes, cfg.n_folds, cfg.seed, threads)?;

        let meta_set = LabeledSet::new(
            meta_features.matrix,
            train.labels.clone(),
            cfg.base_learners.clone(),
        )?;
        let mut meta = meta_template;
        meta.fit(&meta_set, cfg.seed)?;

        // Refit each base on the full training split for inference.
        let refit_results: Vec<Result<BaseLearner>> = {
            let tasks: Vec<Box<dyn FnOnce() -> Result<BaseLearner> + Send + '_>> = bases
                .drain(..)
                .enumerate()
                .map(|(r, mut base)| {
                    let seed = cfg.seed + r as u64 * 1000 + cfg.n_folds as u64;
                    Box::new(move || {
                        base.fit(train, seed)?;
                        Ok(base)
                    }) as Box<dyn FnOnce() -> Result<BaseLearner> + Send + '_>
                })
                .collect();
            run_tasks(tasks, threads)
        };
        let bases = refit_results.into_iter().collect::<Result<Vec<_>>>()?;

        Ok(Self {
            config: cfg.clone(),
            config_digest: cfg.digest(),
            bases,
            meta,
            fold_assignment: meta_features.fold_assignment,
        })
    }

    /// Base probabilities for each row, in configured learner order.
    pub fn base_probabilities(&self, features: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let mut columns = Vec::with_capacity(self.bases.len());
        for base in &self.bases {
            columns.push(base.predict_proba(features)?);
        }
        Ok((0..features.len())
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect())
    }

    /// The meta-learner applied to the base probabilities.
    pub fn predict_proba(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        let meta_rows = self.base_probabilities(features)?;
        self.meta.predict_proba(&meta_rows)
    }

    pub fn predict(&self, features: &[Vec<f64>]) -> Result<Vec<u8>> {
        Ok(self
            .predict_proba(features)?
            .into_iter()
            .map(|p| u8::from(p >= 0.5))
            .collect())
    }

    pub fn n_features(&self) -> usize {
        self.bases
            .first()
            .map(crate::model_io::base_n_features)
            .unwrap_or(0)
    }
}
