//! Platt scaling: a two-parameter sigmoid over raw decision values,
//! fitted by Newton iterations on the smoothed-label likelihood.

use serde::{Deserialize, Serialize};

use super::sigmoid;
use crate::error::{Error, Result};
use crate::model_io::dec17_scalar;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PlattCalibration {
    #[serde(with = "dec17_scalar")]
    pub slope: f64,
    #[serde(with = "dec17_scalar")]
    pub intercept: f64,
}

impl PlattCalibration {
    /// Calibrated probability for a raw decision value.
    pub fn probability(&self, score: f64) -> f64 {
        sigmoid(self.slope * score + self.intercept)
    }

    /// Fits `(slope, intercept)` so that `sigmoid(slope * s + intercept)`
    /// tracks the positive rate as a function of the score `s`.
    ///
    /// Targets use Platt's label smoothing: positives train toward
    /// `(n_pos + 1) / (n_pos + 2)`, negatives toward `1 / (n_neg + 2)`.
    pub fn fit(scores: &[f64], labels: &[u8]) -> Result<Self> {
        if scores.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} scores but {} labels",
                scores.len(),
                labels.len()
            )));
        }
        let n_pos = labels.iter().filter(|&&y| y == 1).count();
        let n_neg = labels.len() - n_pos;
        if n_pos == 0 || n_neg == 0 {
            return Err(Error::Train(
                "calibration requires both classes in the training data".into(),
            ));
        }
        let t_pos = (n_pos as f64 + 1.0) / (n_pos as f64 + 2.0);
        let t_neg = 1.0 / (n_neg as f64 + 2.0);
        let targets: Vec<f64> = labels
            .iter()
            .map(|&y| if y == 1 { t_pos } else { t_neg })
            .collect();

        // Newton on the 2-parameter logistic likelihood; deterministic
        // start at slope 0 with the intercept matching the base rate.
        let base = n_pos as f64 / labels.len() as f64;
        let mut slope = 0.0;
        let mut intercept = (base / (1.0 - base)).ln();
        for _ in 0..200 {
            let mut g_slope = 0.0;
            let mut g_int = 0.0;
            let mut h_ss = 0.0;
            let mut h_si = 0.0;
            let mut h_ii = 0.0;
            for (&s, &t) in scores.iter().zip(&targets) {
                let p = sigmoid(slope * s + intercept);
                let r = t - p;
                g_slope += r * s;
                g_int += r;
                let w = (p * (1.0 - p)).max(1e-12);
                h_ss += w * s * s;
                h_si += w * s;
                h_ii += w;
            }
            if (g_slope * g_slope + g_int * g_int).sqrt() < 1e-12 {
                break;
            }
            let det = h_ss * h_ii - h_si * h_si;
            if det.abs() < 1e-12 {
                // Nearly singular (e.g. constant scores): fall back to a
                // small gradient step.
                slope += 1e-3 * g_slope;
                intercept += 1e-3 * g_int;
            } else {
                slope += (h_ii * g_slope - h_si * g_int) / det;
                intercept += (h_ss * g_int - h_si * g_slope) / det;
            }
        }
        if !slope.is_finite() || !intercept.is_finite() {
            return Err(Error::Train("calibration produced non-finite parameters".into()));
        }
        Ok(Self { slope, intercept })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibrated_probabilities_monotone_in_score() {
        let scores = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
        let labels = [0, 0, 0, 1, 1, 1];
        let cal = PlattCalibration::fit(&scores, &labels).unwrap();
        assert!(cal.slope > 0.0);
        let mut last = 0.0;
        for s in [-3.0, -1.0, 0.0, 1.0, 3.0] {
            let p = cal.probability(s);
            assert!(p >= last);
            last = p;
        }
    }

    #[test]
    fn zero_score_on_balanced_data_is_near_half() {
        let scores = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0];
        let labels = [0, 0, 0, 1, 1, 1];
        let cal = PlattCalibration::fit(&scores, &labels).unwrap();
        let p = cal.probability(0.0);
        assert!((0.25..=0.75).contains(&p), "p = {p}");
    }

    #[test]
    fn single_class_is_training_error() {
        assert!(PlattCalibration::fit(&[1.0, 2.0], &[1, 1]).is_err());
    }
}
