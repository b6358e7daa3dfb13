//! Confusion matrix, the four scalar scores, and ROC/AUC.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary confusion counts with the positive class = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    #[serde(rename = "tp")]
    pub true_positives: u64,
    #[serde(rename = "tn")]
    pub true_negatives: u64,
    #[serde(rename = "fp")]
    pub false_positives: u64,
    #[serde(rename = "fn")]
    pub false_negatives: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.true_positives + self.true_negatives + self.false_positives + self.false_negatives
    }
}

/// Tabulates predictions against labels.
pub fn confusion(labels: &[u8], predictions: &[u8]) -> Result<ConfusionMatrix> {
    if labels.len() != predictions.len() {
        return Err(Error::Shape(format!(
            "{} labels but {} predictions",
            labels.len(),
            predictions.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::Stat("empty label vector".into()));
    }
    let mut m = ConfusionMatrix {
        true_positives: 0,
        true_negatives: 0,
        false_positives: 0,
        false_negatives: 0,
    };
    for (&y, &p) in labels.iter().zip(predictions) {
        if y > 1 || p > 1 {
            return Err(Error::Schema("labels and predictions must be 0 or 1".into()));
        }
        match (y, p) {
            (1, 1) => m.true_positives += 1,
            (0, 0) => m.true_negatives += 1,
            (0, 1) => m.false_positives += 1,
            (1, 0) => m.false_negatives += 1,
            _ => unreachable!(),
        }
    }
    Ok(m)
}

/// One metric reported under the three aggregation conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricTriple {
    /// Positive class = 1 only.
    pub binary: f64,
    /// Unweighted mean over both classes, each treated as positive in turn.
    pub macro_avg: f64,
    /// Support-weighted mean over both classes.
    pub weighted: f64,
}

/// The four scores plus a record of any division-by-zero fallbacks (those
/// components report 0 instead of NaN so every report serializes).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scores {
    pub accuracy: MetricTriple,
    pub precision: MetricTriple,
    pub recall: MetricTriple,
    pub f1: MetricTriple,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degenerate: Vec<String>,
}

fn safe_div(num: f64, den: f64, what: &str, degenerate: &mut Vec<String>) -> f64 {
    if den == 0.0 {
        degenerate.push(what.to_string());
        0.0
    } else {
        num / den
    }
}

/// Accuracy, precision, recall, and F1 from the confusion counts.
pub fn scores(matrix: &ConfusionMatrix) -> Result<Scores> {
    let total = matrix.total();
    if total == 0 {
        return Err(Error::Stat("empty confusion matrix".into()));
    }
    let (tp, tn, fp, fneg) = (
        matrix.true_positives as f64,
        matrix.true_negatives as f64,
        matrix.false_positives as f64,
        matrix.false_negatives as f64,
    );
    let mut degenerate = Vec::new();
    let accuracy = (tp + tn) / total as f64;

    // Per-class views: class 1 as positive, then class 0 as positive
    // (which swaps tp<->tn and fp<->fn).
    let prec1 = safe_div(tp, tp + fp, "precision(class=1)", &mut degenerate);
    let prec0 = safe_div(tn, tn + fneg, "precision(class=0)", &mut degenerate);
    let rec1 = safe_div(tp, tp + fneg, "recall(class=1)", &mut degenerate);
    let rec0 = safe_div(tn, tn + fp, "recall(class=0)", &mut degenerate);
    let f1_1 = safe_div(
        2.0 * prec1 * rec1,
        prec1 + rec1,
        "f1(class=1)",
        &mut degenerate,
    );
    let f1_0 = safe_div(
        2.0 * prec0 * rec0,
        prec0 + rec0,
        "f1(class=0)",
        &mut degenerate,
    );

    let support1 = tp + fneg;
    let support0 = tn + fp;
    let n = total as f64;
    let triple = |v1: f64, v0: f64| MetricTriple {
        binary: v1,
        macro_avg: (v1 + v0) / 2.0,
        weighted: (support1 * v1 + support0 * v0) / n,
    };

    Ok(Scores {
        // Accuracy is symmetric in the class roles, so all three
        // conventions coincide.
        accuracy: MetricTriple {
            binary: accuracy,
            macro_avg: accuracy,
            weighted: accuracy,
        },
        precision: triple(prec1, prec0),
        recall: triple(rec1, rec0),
        f1: triple(f1_1, f1_0),
        degenerate,
    })
}

/// ROC points and area under the curve.
///
/// Thresholds sweep the distinct probabilities in descending order with
/// ties grouped, so the trapezoidal area equals the Mann-Whitney rank
/// statistic with ties counted half.
pub fn roc_auc(labels: &[u8], probabilities: &[f64]) -> Result<(Vec<(f64, f64)>, f64)> {
    if labels.len() != probabilities.len() {
        return Err(Error::Shape(format!(
            "{} labels but {} probabilities",
            labels.len(),
            probabilities.len()
        )));
    }
    if probabilities.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain("probabilities must be finite".into()));
    }
    let n_pos = labels.iter().filter(|&&y| y == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Stat("AUC undefined: labels contain a single class".into()));
    }

    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| probabilities[b].total_cmp(&probabilities[a]));

    let mut points = vec![(0.0, 0.0)];
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut auc = 0.0;
    let mut i = 0;
    while i < order.len() {
        // All samples sharing this probability enter together.
        let p = probabilities[order[i]];
        let mut j = i;
        let (mut d_tp, mut d_fp) = (0u64, 0u64);
        while j < order.len() && probabilities[order[j]] == p {
            if labels[order[j]] == 1 {
                d_tp += 1;
            } else {
                d_fp += 1;
            }
            j += 1;
        }
        let (x0, y0) = (fp as f64 / n_neg as f64, tp as f64 / n_pos as f64);
        tp += d_tp;
        fp += d_fp;
        let (x1, y1) = (fp as f64 / n_neg as f64, tp as f64 / n_pos as f64);
        auc += (x1 - x0) * (y0 + y1) / 2.0;
        points.push((x1, y1));
        i = j;
    }
    if *points.last().unwrap() != (1.0, 1.0) {
        points.push((1.0, 1.0));
    }
    Ok((points, auc))
}

/// Full evaluation artifact: confusion matrix, score triples, and the ROC
/// curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub matrix: ConfusionMatrix,
    #[serde(flatten)]
    pub scores: Scores,
    pub roc_points: Vec<(f64, f64)>,
    pub auc: f64,
}

/// Evaluates hard predictions (probability >= 0.5) and the ranking
/// quality of the probabilities in one pass.
pub fn evaluate(labels: &[u8], probabilities: &[f64]) -> Result<EvalReport> {
    let predictions: Vec<u8> = probabilities.iter().map(|&p| u8::from(p >= 0.5)).collect();
    let matrix = confusion(labels, &predictions)?;
    let scores = scores(&matrix)?;
    let (roc_points, auc) = roc_auc(labels, probabilities)?;
    Ok(EvalReport {
        matrix,
        scores,
        roc_points,
        auc,
    })
}
