//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measurements (run with `--nocapture` to see them).

use std::path::Path;
use std::time::Instant;

use stackline::chi2::{chi2_sf, chi_square_statistic, ContingencyTable};
use stackline::config::PipelineConfig;
use stackline::dataset::{balance, LabeledSet};
use stackline::error::Error;
use stackline::frame::{read_csv_from, write_csv, Cell, ColumnKind, Frame};
use stackline::learners::{
    round_weight, AdaBoostModel, GradBoostModel, Learner, LogRegModel, MlpModel,
    NaiveBayesModel,
};
use stackline::metrics::{confusion, roc_auc, scores};
use stackline::pipeline;
use stackline::rng::SeededRng;
use stackline::stacking::build_meta_features;

// ---------------------------------------------------------------------
// Criterion 1: metrics equal a brute-force recount; AUC equals the
// pairwise rank oracle within 1e-9; 1000 random vectors in under 5 s.
// ---------------------------------------------------------------------

fn brute_counts(labels: &[u8], preds: &[u8]) -> (f64, f64, f64, f64) {
    let n = labels.len() as f64;
    let mut tp = 0.0;
    let mut tn = 0.0;
    let mut fp = 0.0;
    let mut fneg = 0.0;
    for (&y, &p) in labels.iter().zip(preds) {
        match (y, p) {
            (1, 1) => tp += 1.0,
            (0, 0) => tn += 1.0,
            (0, 1) => fp += 1.0,
            _ => fneg += 1.0,
        }
    }
    let acc = (tp + tn) / n;
    let prec = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
    let rec = if tp + fneg > 0.0 { tp / (tp + fneg) } else { 0.0 };
    let f1 = if prec + rec > 0.0 {
        2.0 * prec * rec / (prec + rec)
    } else {
        0.0
    };
    (acc, prec, rec, f1)
}

fn pairwise_auc(labels: &[u8], probs: &[f64]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &yi) in labels.iter().enumerate() {
        if yi != 1 {
            continue;
        }
        for (j, &yj) in labels.iter().enumerate() {
            if yj != 0 {
                continue;
            }
            pairs += 1.0;
            wins += if probs[i] > probs[j] {
                1.0
            } else if probs[i] == probs[j] {
                0.5
            } else {
                0.0
            };
        }
    }
    wins / pairs
}

#[test]
fn criterion_1_metrics_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = SeededRng::new(1001);
    let mut auc_checked = 0usize;
    for _ in 0..1000 {
        let n = 1 + rng.below(200);
        let labels: Vec<u8> = (0..n).map(|_| (rng.uniform() < 0.5) as u8).collect();
        let preds: Vec<u8> = (0..n).map(|_| (rng.uniform() < 0.5) as u8).collect();
        let s = scores(&confusion(&labels, &preds).unwrap()).unwrap();
        let (acc, prec, rec, f1) = brute_counts(&labels, &preds);
        assert_eq!(s.accuracy.binary, acc);
        assert_eq!(s.precision.binary, prec);
        assert_eq!(s.recall.binary, rec);
        assert_eq!(s.f1.binary, f1);

        if labels.contains(&1) && labels.contains(&0) {
            // Quantized probabilities exercise the tie handling.
            let probs: Vec<f64> = (0..n).map(|_| (rng.below(10) as f64) / 9.0).collect();
            let (_, auc) = roc_auc(&labels, &probs).unwrap();
            let oracle = pairwise_auc(&labels, &probs);
            assert!(
                (auc - oracle).abs() < 1e-9,
                "auc {auc} vs pairwise oracle {oracle}"
            );
            auc_checked += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 1 PASS: 1000 score recounts exact, {auc_checked} AUC oracle matches (<1e-9) \
         in {elapsed:?}"
    );
}

// ---------------------------------------------------------------------
// Criterion 2: chi2_sf agrees with adaptive numerical integration of the
// chi-square density within 1e-8 for dof in {1,2,5,10,50} and statistic
// in [0, 200]; the hand-built 2x2 table gives 6.6667 / p 0.0098.
// ---------------------------------------------------------------------

/// Exact Γ(dof/2) by recurrence from Γ(1) = 1 and Γ(1/2) = √π; keeps the
/// oracle independent of the library's log-gamma.
fn gamma_of_half(dof: usize) -> f64 {
    let mut t = if dof.is_multiple_of(2) { 1.0 } else { 0.5 };
    let mut value = if dof.is_multiple_of(2) {
        1.0
    } else {
        std::f64::consts::PI.sqrt()
    };
    while t < dof as f64 / 2.0 {
        value *= t;
        t += 1.0;
    }
    value
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64, depth: usize) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f((a + b) / 2.0) + f(b))
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        eps: f64,
        depth: usize,
    ) -> f64 {
        let m = (a + b) / 2.0;
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, m, left, eps / 2.0, depth - 1)
                + recurse(f, m, b, right, eps / 2.0, depth - 1)
        }
    }
    recurse(f, a, b, simpson(f, a, b), eps, depth)
}

/// Oracle tail probability: integrate the chi-square density after the
/// substitution t = u^2, which removes the dof = 1 singularity at zero.
fn chi2_sf_oracle(statistic: f64, dof: usize) -> f64 {
    if statistic == 0.0 {
        return 1.0;
    }
    let norm = 2.0 / (2f64.powf(dof as f64 / 2.0) * gamma_of_half(dof));
    let density = move |u: f64| norm * u.powi(dof as i32 - 1) * (-u * u / 2.0).exp();
    let cdf = adaptive_simpson(&density, 0.0, statistic.sqrt(), 1e-13, 48);
    (1.0 - cdf).clamp(0.0, 1.0)
}

#[test]
fn criterion_2_chi_square_oracle_equivalence() {
    let started = Instant::now();
    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    for dof in [1usize, 2, 5, 10, 50] {
        let mut stat = 0.0;
        while stat <= 200.0 {
            let sf = chi2_sf(stat, dof).unwrap();
            let oracle = chi2_sf_oracle(stat, dof);
            let err = (sf - oracle).abs();
            worst = worst.max(err);
            assert!(
                err <= 1e-8,
                "dof {dof}, statistic {stat}: sf {sf} vs oracle {oracle} (err {err:e})"
            );
            checked += 1;
            stat += 2.5;
        }
    }

    let table = ContingencyTable::from_counts(vec![vec![10, 20], vec![20, 10]]).unwrap();
    let (stat, dof) = chi_square_statistic(&table).unwrap();
    assert!((stat - 6.6667).abs() <= 1e-4, "statistic {stat}");
    assert_eq!(dof, 1);
    let p = chi2_sf(stat, dof).unwrap();
    assert!((p - 0.0098).abs() <= 1e-3, "p {p}");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 2 PASS: {checked} integration cross-checks (worst |err| {worst:.2e}), \
         hand table statistic {stat:.4} p {p:.4}, in {elapsed:?}"
    );
}

// ---------------------------------------------------------------------
// Criterion 3: MLP and logistic-regression analytic gradients match
// central finite differences (h = 1e-5, relative error < 1e-4) on 20
// random 5-sample / 3-feature instances, in under 10 s.
// ---------------------------------------------------------------------

fn random_instance(rng: &mut SeededRng) -> LabeledSet {
    let features: Vec<Vec<f64>> = (0..5)
        .map(|_| (0..3).map(|_| rng.normal()).collect())
        .collect();
    // Guarantee both classes so the instances stay generic.
    let mut labels: Vec<u8> = (0..5).map(|_| (rng.uniform() < 0.5) as u8).collect();
    labels[0] = 0;
    labels[1] = 1;
    LabeledSet::new(features, labels, vec!["a".into(), "b".into(), "c".into()]).unwrap()
}

fn max_rel_err(analytic: &[f64], numeric: &[f64]) -> f64 {
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| (a - n).abs() / a.abs().max(n.abs()).max(1e-8))
        .fold(0.0, f64::max)
}

#[test]
fn criterion_3_gradient_checks() {
    let started = Instant::now();
    let h = 1e-5;
    let mut rng = SeededRng::new(3003);
    let mut worst: f64 = 0.0;
    for instance in 0..20u64 {
        let data = random_instance(&mut rng);

        let mut mlp = MlpModel::new(4, 0.1, 0);
        mlp.initialize(3, 7000 + instance);
        let (_, grad) = mlp.loss_and_gradient(&data);
        let mut analytic: Vec<f64> = grad.hidden_weights.iter().flatten().copied().collect();
        analytic.extend(&grad.hidden_biases);
        analytic.extend(&grad.output_weights);
        analytic.push(grad.output_bias);
        let base = mlp.params_flat();
        let numeric: Vec<f64> = (0..base.len())
            .map(|i| {
                let mut params = base.clone();
                params[i] += h;
                let mut plus = mlp.clone();
                plus.set_params_flat(&params);
                params[i] -= 2.0 * h;
                let mut minus = mlp.clone();
                minus.set_params_flat(&params);
                (plus.loss(&data) - minus.loss(&data)) / (2.0 * h)
            })
            .collect();
        let mlp_err = max_rel_err(&analytic, &numeric);

        let mut lr = LogRegModel::new(0.1, 0);
        lr.n_features = 3;
        lr.weights = (0..3).map(|_| rng.normal()).collect();
        lr.bias = rng.normal();
        let (_, grad_w, grad_b) = lr.loss_and_gradient(&data);
        let mut analytic = grad_w;
        analytic.push(grad_b);
        let mut numeric = Vec::new();
        for i in 0..3 {
            let mut plus = lr.clone();
            plus.weights[i] += h;
            let mut minus = lr.clone();
            minus.weights[i] -= h;
            numeric.push((plus.loss(&data) - minus.loss(&data)) / (2.0 * h));
        }
        let mut plus = lr.clone();
        plus.bias += h;
        let mut minus = lr.clone();
        minus.bias -= h;
        numeric.push((plus.loss(&data) - minus.loss(&data)) / (2.0 * h));
        let lr_err = max_rel_err(&analytic, &numeric);

        worst = worst.max(mlp_err).max(lr_err);
        assert!(
            mlp_err < 1e-4 && lr_err < 1e-4,
            "instance {instance}: mlp {mlp_err:e}, logreg {lr_err:e}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "criterion 3 PASS: 20 instances, worst relative error {worst:.2e}, in {elapsed:?}"
    );
}

// ---------------------------------------------------------------------
// Criterion 4: AdaBoost invariants.
// ---------------------------------------------------------------------

#[test]
fn criterion_4_adaboost_invariants() {
    // Weight sums after every round.
    let mut rng = SeededRng::new(4004);
    let labels: Vec<u8> = (0..120).map(|_| (rng.uniform() < 0.5) as u8).collect();
    let features: Vec<Vec<f64>> = labels
        .iter()
        .map(|&y| (0..4).map(|_| rng.normal() + 0.8 * y as f64).collect())
        .collect();
    let train = LabeledSet::new(
        features,
        labels,
        (0..4).map(|j| format!("f{j}")).collect(),
    )
    .unwrap();
    let mut model = AdaBoostModel::new(40);
    let audit = model.fit_with_audit(&train, 0).unwrap();
    assert!(!audit.weight_sums.is_empty());
    for (round, sum) in audit.weight_sums.iter().enumerate() {
        assert!(
            (sum - 1.0).abs() <= 1e-12,
            "round {round}: weights sum to {sum}"
        );
    }

    // Round weight at epsilon = 0.1.
    let beta = round_weight(0.1);
    assert!((beta - 1.0986).abs() <= 1e-4, "beta {beta}");

    // 1-D separable data: perfect after round one.
    let features: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64]).collect();
    let labels: Vec<u8> = (0..30).map(|i| u8::from(i >= 15)).collect();
    let train = LabeledSet::new(features, labels.clone(), vec!["x".into()]).unwrap();
    let mut model = AdaBoostModel::new(50);
    model.fit(&train, 0).unwrap();
    assert_eq!(model.stumps.len(), 1);
    assert_eq!(model.predict(&train.features).unwrap(), labels);

    println!(
        "criterion 4 PASS: {} rounds of unit weight sums, beta(0.1) = {beta:.4}, \
         separable data solved in round 1",
        audit.weight_sums.len()
    );
}

// ---------------------------------------------------------------------
// Criterion 5: leakage-freedom of the out-of-fold construction, probed
// with an instrumented learner over 5 random fold seeds.
// ---------------------------------------------------------------------

/// Records the exact rows it was fitted on and predicts 1.0 only for
/// those rows.
#[derive(Clone, Default)]
struct RowRecorder {
    fitted_rows: Vec<Vec<f64>>,
}

impl Learner for RowRecorder {
    fn name(&self) -> &'static str {
        "row_recorder"
    }
    fn fit(&mut self, train: &LabeledSet, _seed: u64) -> stackline::Result<()> {
        self.fitted_rows = train.features.clone();
        Ok(())
    }
    fn predict_proba(&self, features: &[Vec<f64>]) -> stackline::Result<Vec<f64>> {
        Ok(features
            .iter()
            .map(|x| f64::from(self.fitted_rows.contains(x)))
            .collect())
    }
    fn clone_unfit(&self) -> Box<dyn Learner> {
        Box::new(Self::default())
    }
}

#[test]
fn criterion_5_leakage_freedom() {
    // Unique rows so membership testing identifies them exactly.
    let features: Vec<Vec<f64>> = (0..90).map(|i| vec![i as f64, (i * i) as f64]).collect();
    let labels: Vec<u8> = (0..90).map(|i| (i % 2) as u8).collect();
    let train = LabeledSet::new(features, labels, vec!["a".into(), "b".into()]).unwrap();
    for seed in [11u64, 22, 33, 44, 55] {
        let protos: Vec<Box<dyn Learner>> = vec![
            Box::new(RowRecorder::default()),
            Box::new(RowRecorder::default()),
        ];
        let mf = build_meta_features(&train, &protos, 5, seed, 0).unwrap();
        for (i, row) in mf.matrix.iter().enumerate() {
            for (r, &cell) in row.iter().enumerate() {
                assert_eq!(
                    cell, 0.0,
                    "seed {seed}: learner {r} was fitted on row {i} it predicted"
                );
            }
        }
    }
    println!("criterion 5 PASS: no meta-feature cell came from a learner fitted on its own row (5 seeds)");
}

// ---------------------------------------------------------------------
// Criterion 6: end-to-end synthetic benchmark with the default
// configuration, averaged over 5 seeds, in under 120 s serial.
// ---------------------------------------------------------------------

#[test]
fn criterion_6_end_to_end_synthetic_benchmark() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut stack_accs = Vec::new();
    let mut max_base_accs = Vec::new();
    for seed in 0..5u64 {
        let mut cfg = PipelineConfig::default();
        cfg.input = dir.path().join(format!("data_{seed}.csv"));
        cfg.output_dir = dir.path().join(format!("out_{seed}"));
        cfg.seed = 42 + seed;
        cfg.split.seed = 42 + seed;
        cfg.stacking.seed = 42 + seed;
        cfg.synth.seed = 42 + seed;

        pipeline::run_synth(&cfg).unwrap();
        pipeline::run_preprocess(&cfg).unwrap();
        pipeline::run_select(&cfg).unwrap();
        let (rows, _) = pipeline::run_compare(&cfg, 0).unwrap();

        let stack = rows
            .iter()
            .find(|r| r.model == "Stacking Ensemble")
            .unwrap()
            .accuracy;
        let max_base = ["K-Nearest Neighbors", "SVM", "MLP Classifier", "AdaBoost"]
            .iter()
            .map(|name| rows.iter().find(|r| &r.model == name).unwrap().accuracy)
            .fold(0.0f64, f64::max);
        stack_accs.push(stack);
        max_base_accs.push(max_base);
    }
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let stack_mean = mean(&stack_accs);
    let base_mean = mean(&max_base_accs);
    let elapsed = started.elapsed();
    assert!(
        stack_mean >= 0.90,
        "stacking mean accuracy {stack_mean:.4} below 0.90 (per seed: {stack_accs:?})"
    );
    assert!(
        stack_mean >= base_mean - 0.01,
        "stacking mean {stack_mean:.4} more than 1 point below best base {base_mean:.4}"
    );
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!(
        "criterion 6 PASS: stacking mean accuracy {stack_mean:.4} (per seed {stack_accs:?}), \
         best-base mean {base_mean:.4}, in {elapsed:?}"
    );
}

// ---------------------------------------------------------------------
// Criterion 7: byte-identical artifacts for identical configurations
// (manifests compared with timings excluded).
// ---------------------------------------------------------------------

#[test]
fn criterion_7_full_pipeline_determinism() {
    // Identical config, run twice into the same locations; everything
    // from the first run is deleted before the rerun.
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = PipelineConfig::default();
    cfg.input = dir.path().join("data.csv");
    cfg.output_dir = dir.path().join("out");
    cfg.synth.n_rows = 600;

    let mut artifacts: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
    let mut manifests: Vec<Vec<String>> = Vec::new();
    for _run in 0..2 {
        pipeline::run_synth(&cfg).unwrap();
        pipeline::run_preprocess(&cfg).unwrap();
        pipeline::run_select(&cfg).unwrap();
        pipeline::run_train(&cfg, 0).unwrap();
        pipeline::run_evaluate(&cfg, &pipeline::model_path(&cfg), "test").unwrap();

        let mut files = Vec::new();
        let mut manifest_norms = Vec::new();
        let mut paths: Vec<_> = walk_files(&cfg.output_dir);
        paths.sort();
        for path in paths {
            let rel = path
                .strip_prefix(&cfg.output_dir)
                .unwrap()
                .display()
                .to_string();
            let bytes = std::fs::read(&path).unwrap();
            if rel.ends_with("_manifest.json") {
                // Manifests carry timings; compare them normalized.
                let manifest: pipeline::RunManifest =
                    serde_json::from_slice(&bytes).unwrap();
                manifest_norms.push(serde_json::to_string(&manifest.normalized()).unwrap());
            } else {
                files.push((rel, bytes));
            }
        }
        artifacts.push(files);
        manifests.push(manifest_norms);
        std::fs::remove_dir_all(&cfg.output_dir).unwrap();
        std::fs::remove_file(&cfg.input).unwrap();
    }
    assert!(!artifacts[0].is_empty());
    assert_eq!(artifacts[0].len(), artifacts[1].len());
    for (a, b) in artifacts[0].iter().zip(&artifacts[1]) {
        assert_eq!(a.0, b.0, "artifact sets differ");
        assert_eq!(a.1, b.1, "artifact {} differs between runs", a.0);
    }
    assert_eq!(manifests[0], manifests[1], "normalized manifests differ");
    println!(
        "criterion 7 PASS: {} artifacts byte-identical across two runs \
         ({} manifests identical after removing timings)",
        artifacts[0].len(),
        manifests[0].len()
    );
}

fn walk_files(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(walk_files(&path));
        } else {
            out.push(path);
        }
    }
    out
}

// ---------------------------------------------------------------------
// Criterion 8 (informative, non-gating for exact paper numbers): the
// reproduction harness must run the survey pipeline end to end. A
// synthetic stand-in export with the survey's 19-column schema checks the
// machinery; when STACKLINE_PAPER_DATA points at the real export, the
// shape trajectory, ranking, and ordering assertions run against it.
// ---------------------------------------------------------------------

/// Builds a 2556-row stand-in for the survey export: 19 columns, three
/// of them mostly null, five junk columns the drop list removes, and
/// signal concentrated in Age, suicidal thoughts, and Work Pressure.
fn faux_survey_frame() -> Frame {
    let mut rng = SeededRng::new(8008);
    let names: Vec<String> = [
        "Name",
        "Gender",
        "Age",
        "City",
        "Working Professional or Student",
        "Profession",
        "Academic Pressure",
        "Work Pressure",
        "CGPA",
        "Study Satisfaction",
        "Job Satisfaction",
        "Sleep Duration",
        "Dietary Habits",
        "Degree",
        "Have you ever had suicidal thoughts ?",
        "Work/Study Hours",
        "Financial Stress",
        "Family History of Mental Illness",
        "Depression",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let kinds = vec![
        ColumnKind::Categorical, // Name
        ColumnKind::Categorical, // Gender
        ColumnKind::Numeric,     // Age
        ColumnKind::Categorical, // City
        ColumnKind::Categorical, // type
        ColumnKind::Categorical, // Profession
        ColumnKind::Numeric,     // Academic Pressure (mostly null)
        ColumnKind::Numeric,     // Work Pressure
        ColumnKind::Numeric,     // CGPA (mostly null)
        ColumnKind::Numeric,     // Study Satisfaction (mostly null)
        ColumnKind::Numeric,     // Job Satisfaction
        ColumnKind::Categorical, // Sleep Duration
        ColumnKind::Categorical, // Dietary Habits
        ColumnKind::Categorical, // Degree
        ColumnKind::Categorical, // suicidal thoughts
        ColumnKind::Numeric,     // Work/Study Hours
        ColumnKind::Numeric,     // Financial Stress
        ColumnKind::Categorical, // Family History
        ColumnKind::Categorical, // Depression
    ];
    let cities = ["Dhaka", "Delhi", "Mumbai", "Pune"];
    let sleep = ["Less than 5 hours", "5-6 hours", "7-8 hours", "More than 8 hours"];
    let diets = ["Healthy", "Moderate", "Unhealthy"];
    let degrees = ["BSc", "MSc", "BA", "PhD"];
    let mut rows = Vec::with_capacity(2556);
    for i in 0..2556 {
        let depressed = rng.uniform() < 0.45;
        let y = depressed as usize as f64;
        let pick = |rng: &mut SeededRng, xs: &[&str]| xs[rng.below(xs.len())].to_string();
        let mut row = vec![
            Cell::Text(format!("Participant {i}")),
            Cell::Text(if rng.uniform() < 0.5 { "Male" } else { "Female" }.into()),
            // Age: strong signal (younger skews depressed here).
            Cell::Number((38.0 - 9.0 * y + 6.0 * rng.normal()).round().clamp(18.0, 60.0)),
            Cell::Text(pick(&mut rng, &cities)),
            Cell::Text("Working Professional".into()),
            Cell::Text(pick(&mut rng, &["Engineer", "Teacher", "Doctor", "Sales"])),
            Cell::Missing, // Academic Pressure: student-only
            // Work Pressure 1..5: second-strongest signal.
            Cell::Number(((1.5 + 2.2 * y + 1.1 * rng.normal()).round()).clamp(1.0, 5.0)),
            Cell::Missing, // CGPA: student-only
            Cell::Missing, // Study Satisfaction: student-only
            Cell::Number(((4.0 - 1.2 * y + 1.4 * rng.normal()).round()).clamp(1.0, 5.0)),
            Cell::Text(
                if rng.uniform() < 0.35 + 0.2 * y {
                    sleep[rng.below(2)]
                } else {
                    sleep[2 + rng.below(2)]
                }
                .into(),
            ),
            Cell::Text(pick(&mut rng, &diets)),
            Cell::Text(pick(&mut rng, &degrees)),
            // Suicidal thoughts: strong signal.
            Cell::Text(
                if rng.uniform() < 0.1 + 0.72 * y { "Yes" } else { "No" }.into(),
            ),
            Cell::Number((rng.below(13)) as f64),
            Cell::Number(((1.8 + 0.9 * y + 1.3 * rng.normal()).round()).clamp(1.0, 5.0)),
            Cell::Text(if rng.uniform() < 0.3 + 0.15 * y { "Yes" } else { "No" }.into()),
            Cell::Text(if depressed { "Yes" } else { "No" }.into()),
        ];
        // A sprinkle of nulls in regular columns; rows with them get
        // dropped by listwise deletion, shrinking 2556 toward ~2054.
        if rng.uniform() < 0.20 {
            let victim = [2usize, 7, 10, 11, 12, 15, 16][rng.below(7)];
            row[victim] = Cell::Missing;
        }
        rows.push(row);
    }
    Frame::new(names, kinds, rows).unwrap()
}

fn assert_repro_properties(summary: &pipeline::ReproSummary, strict: bool) {
    assert_eq!(summary.raw_cols, 19, "raw export should have 19 columns");
    assert_eq!(summary.clean_cols, 11, "cleaning should leave 11 columns");
    if strict {
        let (lo, hi) = (2054.0 * 0.98, 2054.0 * 1.02);
        let rows = summary.clean_rows as f64;
        assert!(
            (lo..=hi).contains(&rows),
            "cleaned rows {rows} outside 2054 +/- 2%"
        );
    }
    let top4: Vec<&String> = summary.top_features.iter().take(4).collect();
    for needle in ["Age", "suicidal", "Work Pressure"] {
        assert!(
            top4.iter().any(|f| f.to_lowercase().contains(&needle.to_lowercase())),
            "{needle} not in top-4 features {top4:?}"
        );
    }
    let stack = summary
        .table
        .iter()
        .find(|r| r.model == "Stacking Ensemble")
        .unwrap()
        .accuracy;
    for base in ["K-Nearest Neighbors", "SVM", "MLP Classifier", "AdaBoost"] {
        let row = summary.table.iter().find(|r| r.model == base).unwrap();
        // The at-or-above ordering is the surveyed dataset's property;
        // the stand-in run only guards against gross regressions.
        let slack = if strict { 0.0 } else { 0.02 };
        assert!(
            stack >= row.accuracy - slack,
            "stacking ({stack:.4}) below base {base} ({:.4})",
            row.accuracy
        );
    }
}

#[test]
fn criterion_8_reproduction_harness() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("survey.csv");
    write_csv(&faux_survey_frame(), &data).unwrap();
    let cfg = pipeline::repro_config(&data, &dir.path().join("repro_out"), 42);
    let summary = pipeline::run_repro(&cfg, 0).unwrap();
    assert_repro_properties(&summary, false);
    assert!(summary.clean_rows < summary.raw_rows);
    println!(
        "criterion 8 PASS (stand-in export): {}x{} -> {}x{}, top features {:?}",
        summary.raw_rows,
        summary.raw_cols,
        summary.clean_rows,
        summary.clean_cols,
        &summary.top_features[..4.min(summary.top_features.len())]
    );

    // Real export, when supplied.
    if let Ok(path) = std::env::var("STACKLINE_PAPER_DATA") {
        let data = std::path::PathBuf::from(path);
        let cfg = pipeline::repro_config(&data, &dir.path().join("paper_out"), 42);
        let summary = pipeline::run_repro(&cfg, 0).unwrap();
        assert_eq!(summary.raw_rows, 2556);
        assert_repro_properties(&summary, true);
        println!(
            "criterion 8 PASS (user-supplied export): {}x{} -> {}x{}",
            summary.raw_rows, summary.raw_cols, summary.clean_rows, summary.clean_cols
        );
    }
}

// ---------------------------------------------------------------------
// Criterion 9: degenerate inputs produce the specified errors, never a
// crash or NaN.
// ---------------------------------------------------------------------

#[test]
fn criterion_9_degenerate_input_suite() {
    // Empty frame (header only): cleaning reports a pipeline error.
    let empty = read_csv_from("a,b\n".as_bytes(), &[]).unwrap();
    assert_eq!(empty.n_rows(), 0);
    assert!(matches!(
        stackline::preprocess::clean(&empty, &Default::default()),
        Err(Error::Pipeline(_))
    ));
    // Splitting an empty frame is a config error (too few rows).
    assert!(matches!(
        stackline::dataset::split(&empty, &Default::default()),
        Err(Error::Config(_))
    ));
    // Empty metrics input is a stat error.
    assert!(matches!(confusion(&[], &[]), Err(Error::Stat(_))));

    // Single-class labels.
    let one_class = LabeledSet::new(
        vec![vec![0.0], vec![1.0], vec![2.0]],
        vec![1, 1, 1],
        vec!["x".into()],
    )
    .unwrap();
    assert!(matches!(balance(&one_class, 0), Err(Error::Balance(_))));
    assert!(matches!(
        roc_auc(&[1, 1, 1], &[0.1, 0.5, 0.9]),
        Err(Error::Stat(_))
    ));
    let mut ada = AdaBoostModel::new(5);
    assert!(matches!(ada.fit(&one_class, 0), Err(Error::Train(_))));
    let mut nb = NaiveBayesModel::new();
    assert!(matches!(nb.fit(&one_class, 0), Err(Error::Train(_))));
    let mut gb = GradBoostModel::new(5, 0.1);
    assert!(matches!(gb.fit(&one_class, 0), Err(Error::Train(_))));
    assert!(matches!(
        stackline::stacking::stratified_folds(&[1, 1, 1, 0], 3, 0),
        Err(Error::Stratification(_))
    ));

    // Constant features.
    let constant = LabeledSet::new(
        vec![vec![2.0], vec![2.0], vec![2.0], vec![2.0]],
        vec![0, 1, 0, 1],
        vec!["flat".into()],
    )
    .unwrap();
    let mut ada = AdaBoostModel::new(5);
    assert!(matches!(ada.fit(&constant, 0), Err(Error::Train(_))));
    let mut gb = GradBoostModel::new(5, 0.1);
    assert!(matches!(gb.fit(&constant, 0), Err(Error::Train(_))));
    let degenerate = ContingencyTable::from_counts(vec![vec![2, 2]]).unwrap();
    assert!(matches!(
        chi_square_statistic(&degenerate),
        Err(Error::Stat(_))
    ));

    // All-missing column: dropped by the null threshold; a frame of only
    // missing columns cleans down to nothing, which is the pipeline
    // error again.
    let mostly_null = read_csv_from("a,b\n1,\n2,\n3,\n".as_bytes(), &[]).unwrap();
    let (cleaned, report) =
        stackline::preprocess::clean(&mostly_null, &Default::default()).unwrap();
    assert_eq!(report.dropped_high_null, vec!["b".to_string()]);
    assert_eq!(cleaned.n_cols(), 1);
    let all_null = read_csv_from("a\n\n\n".as_bytes(), &[]).unwrap();
    assert!(matches!(
        stackline::preprocess::clean(&all_null, &Default::default()),
        Err(Error::Pipeline(_))
    ));

    // Surviving outputs stay NaN-free.
    let mut rng = SeededRng::new(9009);
    let labels: Vec<u8> = (0..50).map(|_| (rng.uniform() < 0.5) as u8).collect();
    let features: Vec<Vec<f64>> = labels
        .iter()
        .map(|&y| vec![y as f64 + rng.normal(), 3.0]) // one informative, one constant
        .collect();
    let set = LabeledSet::new(features, labels, vec!["x".into(), "flat".into()]).unwrap();
    let mut nb = NaiveBayesModel::new();
    nb.fit(&set, 0).unwrap();
    for p in nb.predict_proba(&set.features).unwrap() {
        assert!(p.is_finite());
    }

    println!("criterion 9 PASS: empty, single-class, constant-feature, and all-missing inputs all error as specified");
}
