//! Stage orchestration shared by the CLI: each command reads the
//! artifacts of the previous one from the output directory and writes its
//! own plus a run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chi2::select_features;
use crate::config::PipelineConfig;
use crate::dataset::{balance_frame, split, LabeledSet};
use crate::error::{Error, Result};
use crate::frame::{read_csv, write_csv, Cell, ColumnKind, Frame};
use crate::learners::Learner;
use crate::metrics::{evaluate, EvalReport};
use crate::model_io::{load_model, save_model, AnyModel};
use crate::plot;
use crate::preprocess::{clean, fit_encoder, transform, transform_features, CleanReport, FittedEncoder};
use crate::stacking::StackingModel;
use crate::util::run_tasks;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub millis: u64,
    pub rows: usize,
    pub cols: usize,
}

/// Audit trail of one command run: content-hashed config, per-stage
/// timings and shapes, and every file written. Written atomically at run
/// end (and best-effort on stage failure, listing the completed stages).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_digest: String,
    pub stages: Vec<StageRecord>,
    pub artifacts: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clean_report: Option<CleanReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RunManifest {
    fn new(command: &str, digest: String) -> Self {
        Self {
            command: command.to_string(),
            config_digest: digest,
            stages: Vec::new(),
            artifacts: Vec::new(),
            clean_report: None,
            warnings: Vec::new(),
        }
    }

    /// Copy with timings zeroed, for byte-stable comparisons.
    pub fn normalized(&self) -> RunManifest {
        let mut m = self.clone();
        for s in &mut m.stages {
            s.millis = 0;
        }
        m
    }
}

/// Collects stage records and writes the manifest; on a failing stage the
/// partial manifest is flushed before the error propagates.
struct Tracker {
    manifest: RunManifest,
    path: PathBuf,
}

impl Tracker {
    fn new(command: &str, digest: String, dir: &Path) -> Self {
        Self {
            manifest: RunManifest::new(command, digest),
            path: dir.join(format!("{command}_manifest.json")),
        }
    }

    fn stage<T>(
        &mut self,
        name: &str,
        dims: impl Fn(&T) -> (usize, usize),
        f: impl FnOnce() -> Result<T>,
    ) -> Result<T> {
        let started = Instant::now();
        match f() {
            Ok(v) => {
                let (rows, cols) = dims(&v);
                self.manifest.stages.push(StageRecord {
                    name: name.to_string(),
                    millis: started.elapsed().as_millis() as u64,
                    rows,
                    cols,
                });
                Ok(v)
            }
            Err(e) => {
                let _ = self.write(); // manifest of completed stages
                Err(e.in_stage(name))
            }
        }
    }

    fn artifact(&mut self, path: &Path) {
        self.manifest.artifacts.push(path.display().to_string());
    }

    fn write(&self) -> Result<()> {
        write_atomic_json(&self.path, &self.manifest)
    }

    fn finish(mut self) -> Result<RunManifest> {
        let path = self.path.clone();
        self.artifact(&path);
        self.write()?;
        Ok(self.manifest)
    }
}

fn write_atomic_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, serde_json::to_string_pretty(value)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

/// Writes an encoded split as CSV: feature columns then a final `label`
/// column. Floats use shortest round-trip formatting.
fn write_labeled_csv(set: &LabeledSet, path: &Path) -> Result<()> {
    if set.feature_names.iter().any(|n| n == "label") {
        return Err(Error::Schema(
            "a feature named \"label\" collides with the label column".into(),
        ));
    }
    let mut wtr = csv::Writer::from_path(path)?;
    let mut header: Vec<&str> = set.feature_names.iter().map(String::as_str).collect();
    header.push("label");
    wtr.write_record(&header)?;
    for (row, &y) in set.features.iter().zip(&set.labels) {
        let mut record: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
        record.push(format!("{y}"));
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

fn read_labeled_csv(path: &Path) -> Result<LabeledSet> {
    let frame = read_csv(path, &[])?;
    let label_col = frame
        .column_index("label")
        .ok_or_else(|| Error::Schema(format!("{} has no label column", path.display())))?;
    let mut labels = Vec::with_capacity(frame.n_rows());
    for cell in frame.column(label_col) {
        match cell.as_number() {
            Some(0.0) => labels.push(0),
            Some(1.0) => labels.push(1),
            other => {
                return Err(Error::Schema(format!(
                    "label column holds {other:?}, expected 0 or 1"
                )))
            }
        }
    }
    let mut features = Vec::with_capacity(frame.n_rows());
    for r in 0..frame.n_rows() {
        let mut row = Vec::with_capacity(frame.n_cols() - 1);
        for c in 0..frame.n_cols() {
            if c == label_col {
                continue;
            }
            let x = frame.cell(r, c).as_number().ok_or_else(|| {
                Error::Schema(format!(
                    "non-numeric cell in encoded split at row {}",
                    r + 1
                ))
            })?;
            row.push(x);
        }
        features.push(row);
    }
    let names: Vec<String> = frame
        .column_names()
        .iter()
        .enumerate()
        .filter(|&(c, _)| c != label_col)
        .map(|(_, n)| n.clone())
        .collect();
    LabeledSet::new(features, labels, names)
}

/// Picks the cell value counted as positive for frame-level balancing:
/// `yes` (case-insensitive) when present, else the second distinct value
/// in appearance order; numeric targets use 1.
fn infer_positive_cell(frame: &Frame, target: &str) -> Result<Cell> {
    let col = frame
        .column_index(target)
        .ok_or_else(|| Error::Schema(format!("target column {target:?} not found")))?;
    match frame.column_kinds()[col] {
        ColumnKind::Numeric => Ok(Cell::Number(1.0)),
        ColumnKind::Categorical => {
            let mut seen: Vec<&str> = Vec::new();
            for cell in frame.column(col) {
                if let Some(v) = cell.as_text() {
                    if !seen.contains(&v) {
                        seen.push(v);
                    }
                }
            }
            if seen.len() != 2 {
                return Err(Error::Schema(format!(
                    "target column {target:?} has {} distinct values, expected 2",
                    seen.len()
                )));
            }
            let positive = seen
                .iter()
                .find(|v| v.eq_ignore_ascii_case("yes"))
                .unwrap_or(&seen[1]);
            Ok(Cell::Text((*positive).to_string()))
        }
    }
}

pub fn encoder_path(cfg: &PipelineConfig) -> PathBuf {
    cfg.output_dir.join("encoder.json")
}

pub fn encoded_split_path(cfg: &PipelineConfig, split_name: &str) -> PathBuf {
    cfg.output_dir.join(format!("{split_name}_encoded.csv"))
}

pub fn kept_features_path(cfg: &PipelineConfig) -> PathBuf {
    cfg.output_dir.join("kept_features.json")
}

pub fn model_path(cfg: &PipelineConfig) -> PathBuf {
    cfg.output_dir.join("model.json")
}

/// synth: generate the configured dataset and write it to `cfg.input`.
pub fn run_synth(cfg: &PipelineConfig) -> Result<RunManifest> {
    ensure_dir(&cfg.output_dir)?;
    let mut tracker = Tracker::new("synth", cfg.digest(), &cfg.output_dir);
    let frame = tracker.stage(
        "generate",
        |f: &Frame| (f.n_rows(), f.n_cols()),
        || crate::synth::generate(&cfg.synth),
    )?;
    tracker.stage(
        "write_csv",
        |_| (frame.n_rows(), frame.n_cols()),
        || {
            if let Some(parent) = cfg.input.parent() {
                if !parent.as_os_str().is_empty() {
                    ensure_dir(parent)?;
                }
            }
            write_csv(&frame, &cfg.input)
        },
    )?;
    tracker.artifact(&cfg.input);
    tracker.finish()
}

/// preprocess: clean, split, balance the training split, fit the encoder
/// on it, and encode every split.
pub fn run_preprocess(cfg: &PipelineConfig) -> Result<RunManifest> {
    if !cfg.input.exists() {
        // Checked before any artifact is created so a bad path leaves
        // nothing behind.
        return Err(Error::Config(format!(
            "input file {} does not exist",
            cfg.input.display()
        )));
    }
    cfg.preprocess.validate()?;
    cfg.split.validate()?;
    ensure_dir(&cfg.output_dir)?;
    let mut tracker = Tracker::new("preprocess", cfg.digest(), &cfg.output_dir);

    let hints = cfg.schema_hint()?;
    let raw = tracker.stage(
        "read_csv",
        |f: &Frame| (f.n_rows(), f.n_cols()),
        || read_csv(&cfg.input, &hints),
    )?;

    let (cleaned, report) = tracker.stage(
        "clean",
        |(f, _): &(Frame, CleanReport)| (f.n_rows(), f.n_cols()),
        || clean(&raw, &cfg.preprocess),
    )?;
    tracker.manifest.clean_report = Some(report.clone());

    let (train, test, val) = tracker.stage(
        "split",
        |(tr, te, va): &(Frame, Frame, Frame)| {
            (tr.n_rows() + te.n_rows() + va.n_rows(), tr.n_cols())
        },
        || split(&cleaned, &cfg.split),
    )?;
    for (name, frame) in [("split_train", &train), ("split_test", &test), ("split_val", &val)] {
        tracker.manifest.stages.push(StageRecord {
            name: name.into(),
            millis: 0,
            rows: frame.n_rows(),
            cols: frame.n_cols(),
        });
    }

    let train = tracker.stage(
        "balance_train",
        |f: &Frame| (f.n_rows(), f.n_cols()),
        || {
            let positive = infer_positive_cell(&train, &cfg.target)?;
            balance_frame(&train, &cfg.target, &positive, cfg.balance_seed())
        },
    )?;

    let encoder = tracker.stage(
        "fit_encoder",
        |e: &FittedEncoder| (train.n_rows(), e.columns.len()),
        || fit_encoder(&train, &cfg.preprocess),
    )?;
    tracker.manifest.warnings.extend(encoder.warnings.clone());

    let mut encoded = Vec::new();
    for (name, frame) in [("train", &train), ("test", &test), ("val", &val)] {
        let set = tracker.stage(
            &format!("transform_{name}"),
            |s: &LabeledSet| (s.n_rows(), s.n_features()),
            || transform(frame, &encoder, &cfg.target),
        )?;
        encoded.push((name, set));
    }

    for (name, frame) in [("train", &train), ("test", &test), ("val", &val)] {
        let path = cfg.output_dir.join(format!("{name}.csv"));
        write_csv(frame, &path)?;
        tracker.artifact(&path);
    }
    let enc_path = encoder_path(cfg);
    write_atomic_json(&enc_path, &encoder)?;
    tracker.artifact(&enc_path);
    for (name, set) in &encoded {
        let path = encoded_split_path(cfg, name);
        write_labeled_csv(set, &path)?;
        tracker.artifact(&path);
    }
    tracker.finish()
}

fn load_encoder(cfg: &PipelineConfig) -> Result<FittedEncoder> {
    let path = encoder_path(cfg);
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::Config(format!(
            "cannot read {} (run `preprocess` first): {e}",
            path.display()
        ))
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn load_encoded_split(cfg: &PipelineConfig, name: &str) -> Result<LabeledSet> {
    let path = encoded_split_path(cfg, name);
    if !path.exists() {
        return Err(Error::Config(format!(
            "missing {} (run `preprocess` first)",
            path.display()
        )));
    }
    read_labeled_csv(&path)
}

fn load_kept_features(cfg: &PipelineConfig) -> Result<Vec<String>> {
    let path = kept_features_path(cfg);
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::Config(format!(
            "cannot read {} (run `select` first): {e}",
            path.display()
        ))
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// select: chi-square tests on the training split, keep significant
/// features, emit the results CSV and the significance bar chart.
pub fn run_select(cfg: &PipelineConfig) -> Result<RunManifest> {
    ensure_dir(&cfg.output_dir)?;
    let mut tracker = Tracker::new("select", cfg.digest(), &cfg.output_dir);
    let encoder = load_encoder(cfg)?;
    let train = load_encoded_split(cfg, "train")?;

    let (kept, results) = tracker.stage(
        "chi_square",
        |(kept, results): &(Vec<String>, Vec<crate::chi2::ChiSquareResult>)| {
            (results.len(), kept.len())
        },
        || select_features(&train, &encoder, cfg.alpha),
    )?;

    let csv_path = cfg.output_dir.join("chi2_results.csv");
    {
        let mut wtr = csv::Writer::from_path(&csv_path)?;
        wtr.write_record(["feature", "statistic", "dof", "p_value", "kept"])?;
        for r in &results {
            wtr.write_record([
                r.feature_name.as_str(),
                &format!("{}", r.statistic),
                &format!("{}", r.dof),
                &format!("{:e}", r.p_value),
                if r.kept { "true" } else { "false" },
            ])?;
        }
        wtr.flush()?;
    }
    tracker.artifact(&csv_path);

    let bars: Vec<(String, f64)> = results
        .iter()
        .map(|r| {
            (
                r.feature_name.clone(),
                -(r.p_value.max(1e-300)).log10(),
            )
        })
        .collect();
    let svg_path = cfg.output_dir.join("chi2_pvalues.svg");
    std::fs::write(&svg_path, plot::p_value_bars_svg(&bars))?;
    tracker.artifact(&svg_path);

    let kept_path = kept_features_path(cfg);
    write_atomic_json(&kept_path, &kept)?;
    tracker.artifact(&kept_path);
    tracker.finish()
}

/// train: stacked ensemble on the kept features of the balanced training
/// split.
pub fn run_train(cfg: &PipelineConfig, threads: usize) -> Result<RunManifest> {
    ensure_dir(&cfg.output_dir)?;
    let mut tracker = Tracker::new("train", cfg.digest(), &cfg.output_dir);
    let train = load_encoded_split(cfg, "train")?;
    let kept = load_kept_features(cfg)?;
    let train = train.select_features(&kept)?;

    let model = tracker.stage(
        "stack_fit",
        |m: &StackingModel| (train.n_rows(), m.bases.len()),
        || {
            let bases = cfg
                .stacking
                .base_learners
                .iter()
                .map(|name| cfg.learners.build(name))
                .collect::<Result<Vec<_>>>()?;
            StackingModel::fit(
                &train,
                &cfg.stacking,
                bases,
                cfg.learners.meta_learner(),
                threads,
            )
        },
    )?;

    let model_file = model_path(cfg);
    save_model(&AnyModel::Stacking(model.clone()), &model_file)?;
    tracker.artifact(&model_file);

    let base_dir = cfg.output_dir.join("models");
    ensure_dir(&base_dir)?;
    for (i, (name, base)) in cfg
        .stacking
        .base_learners
        .iter()
        .zip(&model.bases)
        .enumerate()
    {
        let path = base_dir.join(format!("base_{i}_{name}.json"));
        save_model(&AnyModel::Base(base.clone()), &path)?;
        tracker.artifact(&path);
    }
    tracker.finish()
}

/// evaluate: score a saved model on one encoded split; writes the JSON
/// report, the ROC curve, and the confusion matrix.
pub fn run_evaluate(
    cfg: &PipelineConfig,
    model_file: &Path,
    split_name: &str,
) -> Result<(EvalReport, RunManifest)> {
    if !["train", "test", "val"].contains(&split_name) {
        return Err(Error::Config(format!(
            "unknown split {split_name:?} (expected train, test, or val)"
        )));
    }
    ensure_dir(&cfg.output_dir)?;
    let mut tracker = Tracker::new(&format!("evaluate_{split_name}"), cfg.digest(), &cfg.output_dir);
    let set = load_encoded_split(cfg, split_name)?;
    let kept = load_kept_features(cfg)?;
    let set = set.select_features(&kept)?;
    let model = load_model(model_file)?;

    let report = tracker.stage(
        "evaluate",
        |_| (set.n_rows(), set.n_features()),
        || {
            let probs = model.predict_proba(&set.features)?;
            evaluate(&set.labels, &probs)
        },
    )?;

    let report_path = cfg.output_dir.join(format!("report_{split_name}.json"));
    write_atomic_json(&report_path, &report)?;
    tracker.artifact(&report_path);
    let roc_path = cfg.output_dir.join(format!("roc_{split_name}.svg"));
    std::fs::write(&roc_path, plot::roc_svg(&report.roc_points, report.auc))?;
    tracker.artifact(&roc_path);
    let conf_path = cfg.output_dir.join(format!("confusion_{split_name}.svg"));
    std::fs::write(&conf_path, plot::confusion_svg(&report.matrix))?;
    tracker.artifact(&conf_path);
    let manifest = tracker.finish()?;
    Ok((report, manifest))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareRow {
    pub model: String,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Fixed comparison order: the seven single models, then the stack.
pub const COMPARE_MODELS: [(&str, &str); 7] = [
    ("Logistic Regression", "logreg"),
    ("K-Nearest Neighbors", "knn"),
    ("SVM", "svm"),
    ("Gradient Boosting", "gradboost"),
    ("AdaBoost", "adaboost"),
    ("Naive Bayes", "naive_bayes"),
    ("MLP Classifier", "mlp"),
];

fn score_row(name: &str, labels: &[u8], probs: &[f64]) -> Result<CompareRow> {
    let preds: Vec<u8> = probs.iter().map(|&p| u8::from(p >= 0.5)).collect();
    let s = crate::metrics::scores(&crate::metrics::confusion(labels, &preds)?)?;
    // Weighted averages, the default reporting convention.
    Ok(CompareRow {
        model: name.to_string(),
        accuracy: s.accuracy.weighted,
        precision: s.precision.weighted,
        recall: s.recall.weighted,
        f1: s.f1.weighted,
    })
}

/// compare: train all eight models on identical data and seeds, score
/// them on the test split, and emit the table as CSV and aligned text.
pub fn run_compare(cfg: &PipelineConfig, threads: usize) -> Result<(Vec<CompareRow>, RunManifest)> {
    ensure_dir(&cfg.output_dir)?;
    let mut tracker = Tracker::new("compare", cfg.digest(), &cfg.output_dir);
    let train = load_encoded_split(cfg, "train")?;
    let test = load_encoded_split(cfg, "test")?;
    let kept = load_kept_features(cfg)?;
    let train = train.select_features(&kept)?;
    let test = test.select_features(&kept)?;

    let rows = tracker.stage(
        "compare",
        |rows: &Vec<CompareRow>| (rows.len(), 5),
        || {
            let single_tasks: Vec<Box<dyn FnOnce() -> Result<Vec<f64>> + Send + '_>> =
                COMPARE_MODELS
                    .iter()
                    .map(|&(_, key)| {
                        let train = &train;
                        let test = &test;
                        Box::new(move || {
                            let mut model = cfg.learners.build(key)?;
                            model.fit(train, cfg.seed)?;
                            model.predict_proba(&test.features)
                        }) as Box<dyn FnOnce() -> Result<Vec<f64>> + Send + '_>
                    })
                    .collect();
            let single_probs = run_tasks(single_tasks, threads);

            let mut rows = Vec::with_capacity(8);
            for (&(display, _), probs) in COMPARE_MODELS.iter().zip(single_probs) {
                rows.push(score_row(display, &test.labels, &probs?)?);
            }

            let bases = cfg
                .stacking
                .base_learners
                .iter()
                .map(|name| cfg.learners.build(name))
                .collect::<Result<Vec<_>>>()?;
            let stack = StackingModel::fit(
                &train,
                &cfg.stacking,
                bases,
                cfg.learners.meta_learner(),
                threads,
            )?;
            let probs = stack.predict_proba(&test.features)?;
            rows.push(score_row("Stacking Ensemble", &test.labels, &probs)?);
            Ok(rows)
        },
    )?;

    let csv_path = cfg.output_dir.join("compare.csv");
    {
        let mut wtr = csv::Writer::from_path(&csv_path)?;
        wtr.write_record(["model", "accuracy", "precision", "recall", "f1"])?;
        for r in &rows {
            wtr.write_record([
                r.model.as_str(),
                &format!("{:.4}", r.accuracy),
                &format!("{:.4}", r.precision),
                &format!("{:.4}", r.recall),
                &format!("{:.4}", r.f1),
            ])?;
        }
        wtr.flush()?;
    }
    tracker.artifact(&csv_path);

    let txt_path = cfg.output_dir.join("compare.txt");
    std::fs::write(&txt_path, render_compare_table(&rows))?;
    tracker.artifact(&txt_path);

    let manifest = tracker.finish()?;
    Ok((rows, manifest))
}

pub fn render_compare_table(rows: &[CompareRow]) -> String {
    let width = rows
        .iter()
        .map(|r| r.model.len())
        .chain(["Model".len()])
        .max()
        .unwrap_or(5);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>9}  {:>9}  {:>9}  {:>9}",
        "Model", "Acc.", "Prec.", "Recall", "F1",
    );
    let _ = writeln!(out, "{}", "-".repeat(width + 4 * 11 + 2));
    for r in rows {
        let _ = writeln!(
            out,
            "{:<width$}  {:>9.4}  {:>9.4}  {:>9.4}  {:>9.4}",
            r.model, r.accuracy, r.precision, r.recall, r.f1,
        );
    }
    out
}

/// predict: append probability and label columns to a raw CSV using a
/// saved model plus the fitted encoder and kept-feature list.
pub fn run_predict(
    cfg: &PipelineConfig,
    model_file: &Path,
    input: &Path,
    output: &Path,
) -> Result<RunManifest> {
    if !input.exists() {
        return Err(Error::Config(format!(
            "input file {} does not exist",
            input.display()
        )));
    }
    ensure_dir(&cfg.output_dir)?;
    let mut tracker = Tracker::new("predict", cfg.digest(), &cfg.output_dir);
    let encoder = load_encoder(cfg)?;
    let kept = load_kept_features(cfg)?;
    let model = load_model(model_file)?;
    let hints = cfg.schema_hint()?;
    let frame = tracker.stage(
        "read_csv",
        |f: &Frame| (f.n_rows(), f.n_cols()),
        || read_csv(input, &hints),
    )?;

    let probs = tracker.stage(
        "predict",
        |p: &Vec<f64>| (p.len(), kept.len()),
        || {
            let (matrix, names) = transform_features(&frame, &encoder, &cfg.target)?;
            let set = LabeledSet::new(matrix, vec![0; frame.n_rows()], names)?;
            let projected = set.select_features(&kept)?;
            if model.n_features() != kept.len() {
                return Err(Error::Shape(format!(
                    "model expects {} features but {} were kept",
                    model.n_features(),
                    kept.len()
                )));
            }
            model.predict_proba(&projected.features)
        },
    )?;

    {
        if frame
            .column_names()
            .iter()
            .any(|n| n == "proba" || n == "predicted_label")
        {
            return Err(Error::Schema(
                "input already has a proba or predicted_label column".into(),
            ));
        }
        let mut wtr = csv::Writer::from_path(output)?;
        let mut header: Vec<String> = frame.column_names().to_vec();
        header.push("proba".into());
        header.push("predicted_label".into());
        wtr.write_record(&header)?;
        for (r, row) in frame.rows().enumerate() {
            let mut record: Vec<String> = row
                .iter()
                .map(|cell| match cell {
                    Cell::Number(x) => format!("{x}"),
                    Cell::Text(s) => s.clone(),
                    Cell::Missing => String::new(),
                })
                .collect();
            record.push(format!("{}", probs[r]));
            record.push(format!("{}", u8::from(probs[r] >= 0.5)));
            wtr.write_record(&record)?;
        }
        wtr.flush()?;
    }
    tracker.artifact(output);
    tracker.finish()
}

/// Shape trajectory and headline results of a reproduction run on a
/// user-supplied survey export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReproSummary {
    pub raw_rows: usize,
    pub raw_cols: usize,
    pub clean_rows: usize,
    pub clean_cols: usize,
    pub top_features: Vec<String>,
    pub table: Vec<CompareRow>,
}

/// Built-in configuration for `--paper-data`: the survey drop list
/// (aliases for export variants are ignored when absent), the 60% null
/// threshold, and the standard split.
pub fn repro_config(data: &Path, out_dir: &Path, seed: u64) -> PipelineConfig {
    let mut cfg = PipelineConfig {
        input: data.to_path_buf(),
        target: "Depression".into(),
        output_dir: out_dir.to_path_buf(),
        seed,
        ..PipelineConfig::default()
    };
    cfg.split.seed = seed;
    cfg.stacking.seed = seed;
    cfg.preprocess.drop_columns = vec![
        "Name".into(),
        "City".into(),
        "Type".into(),
        "Working Professional or Student".into(),
        "Profession".into(),
        "Degree".into(),
        "id".into(),
    ];
    cfg
}

/// Full reproduction pipeline: preprocess, select, compare; returns the
/// shape trajectory, the chi-square ranking, and the comparison table.
pub fn run_repro(cfg: &PipelineConfig, threads: usize) -> Result<ReproSummary> {
    let manifest = run_preprocess(cfg)?;
    run_select(cfg)?;
    let (table, _) = run_compare(cfg, threads)?;

    let report = manifest
        .clean_report
        .clone()
        .ok_or_else(|| Error::Pipeline("preprocess manifest lacks a clean report".into()))?;
    let train = load_encoded_split(cfg, "train")?;
    let encoder = load_encoder(cfg)?;
    let (_, results) = select_features(&train, &encoder, cfg.alpha)?;
    Ok(ReproSummary {
        raw_rows: report.rows_before,
        raw_cols: report.cols_before,
        clean_rows: report.rows_after,
        clean_cols: report.cols_after,
        top_features: results.iter().map(|r| r.feature_name.clone()).collect(),
        table,
    })
}
