//! Dependency-free SVG rendering for the report artifacts. All numbers
//! are written with fixed precision so identical inputs give identical
//! bytes.

use std::fmt::Write;

use crate::metrics::ConfusionMatrix;

const FONT: &str = "font-family=\"monospace\"";

fn header(width: u32, height: u32) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    )
}

/// Horizontal bar chart of -log10(p) per feature, most significant at the
/// top.
pub fn p_value_bars_svg(entries: &[(String, f64)]) -> String {
    let bar_h = 24u32;
    let label_w = 190u32;
    let plot_w = 420u32;
    let top = 40u32;
    let height = top + entries.len() as u32 * (bar_h + 8) + 20;
    let width = label_w + plot_w + 80;
    let mut svg = header(width, height);
    let _ = writeln!(
        svg,
        "<text x=\"10\" y=\"24\" {FONT} font-size=\"15\">Feature significance \
         (-log10 p)</text>"
    );
    let max_value = entries
        .iter()
        .map(|(_, v)| *v)
        .fold(1.0f64, f64::max);
    for (i, (name, value)) in entries.iter().enumerate() {
        let y = top + i as u32 * (bar_h + 8);
        let w = ((value / max_value) * plot_w as f64).max(1.0);
        let _ = writeln!(
            svg,
            "<text x=\"{x}\" y=\"{ty}\" {FONT} font-size=\"12\" text-anchor=\"end\">{name}</text>",
            x = label_w - 6,
            ty = y + bar_h / 2 + 4,
            name = xml_escape(name),
        );
        let _ = writeln!(
            svg,
            "<rect x=\"{label_w}\" y=\"{y}\" width=\"{w:.1}\" height=\"{bar_h}\" \
             fill=\"#4878a8\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{tx:.1}\" y=\"{ty}\" {FONT} font-size=\"11\">{value:.2}</text>",
            tx = label_w as f64 + w + 5.0,
            ty = y + bar_h / 2 + 4,
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// ROC curve on unit axes with the chance diagonal.
pub fn roc_svg(points: &[(f64, f64)], auc: f64) -> String {
    let size = 440u32;
    let margin = 50.0;
    let span = size as f64 - 2.0 * margin;
    let sx = |x: f64| margin + x * span;
    let sy = |y: f64| size as f64 - margin - y * span;
    let mut svg = header(size, size);
    let _ = writeln!(
        svg,
        "<text x=\"{x:.1}\" y=\"26\" {FONT} font-size=\"15\">ROC curve (AUC = {auc:.4})</text>",
        x = margin,
    );
    let _ = writeln!(
        svg,
        "<rect x=\"{m:.1}\" y=\"{m:.1}\" width=\"{s:.1}\" height=\"{s:.1}\" fill=\"none\" \
         stroke=\"#444444\"/>",
        m = margin,
        s = span,
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{a:.1}\" y1=\"{b:.1}\" x2=\"{c:.1}\" y2=\"{d:.1}\" stroke=\"#bbbbbb\" \
         stroke-dasharray=\"6,4\"/>",
        a = sx(0.0),
        b = sy(0.0),
        c = sx(1.0),
        d = sy(1.0),
    );
    let path: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        svg,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#b04030\" stroke-width=\"2\"/>",
        path.join(" ")
    );
    for (t, label) in [(0.0, "0.0"), (0.5, "0.5"), (1.0, "1.0")] {
        let _ = writeln!(
            svg,
            "<text x=\"{x:.1}\" y=\"{y:.1}\" {FONT} font-size=\"11\" \
             text-anchor=\"middle\">{label}</text>",
            x = sx(t),
            y = size as f64 - margin + 18.0,
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.1}\" y=\"{y:.1}\" {FONT} font-size=\"11\" \
             text-anchor=\"end\">{label}</text>",
            x = margin - 8.0,
            y = sy(t) + 4.0,
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{x:.1}\" y=\"{y:.1}\" {FONT} font-size=\"12\" \
         text-anchor=\"middle\">false positive rate</text>",
        x = sx(0.5),
        y = size as f64 - 12.0,
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{y:.1}\" {FONT} font-size=\"12\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {y:.1})\">true positive rate</text>",
        y = sy(0.5),
    );
    svg.push_str("</svg>\n");
    svg
}

/// 2x2 confusion matrix with counts.
pub fn confusion_svg(matrix: &ConfusionMatrix) -> String {
    let cell = 120u32;
    let left = 120u32;
    let top = 80u32;
    let width = left + 2 * cell + 40;
    let height = top + 2 * cell + 40;
    let mut svg = header(width, height);
    let _ = writeln!(
        svg,
        "<text x=\"20\" y=\"28\" {FONT} font-size=\"15\">Confusion matrix</text>"
    );
    // Row = actual class, column = predicted class, positive first.
    let cells = [
        (0u32, 0u32, matrix.true_positives, "#5b8c5a"),
        (1, 0, matrix.false_negatives, "#b8860b"),
        (0, 1, matrix.false_positives, "#b8860b"),
        (1, 1, matrix.true_negatives, "#5b8c5a"),
    ];
    let total = matrix.total().max(1) as f64;
    for (col, row, count, color) in cells {
        let x = left + col * cell;
        let y = top + row * cell;
        let opacity = 0.25 + 0.65 * (count as f64 / total);
        let _ = writeln!(
            svg,
            "<rect x=\"{x}\" y=\"{y}\" width=\"{cell}\" height=\"{cell}\" fill=\"{color}\" \
             fill-opacity=\"{opacity:.3}\" stroke=\"#333333\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{cx}\" y=\"{cy}\" {FONT} font-size=\"18\" \
             text-anchor=\"middle\">{count}</text>",
            cx = x + cell / 2,
            cy = y + cell / 2 + 6,
        );
    }
    for (i, label) in ["pred 1", "pred 0"].iter().enumerate() {
        let _ = writeln!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" {FONT} font-size=\"12\" \
             text-anchor=\"middle\">{label}</text>",
            x = left + i as u32 * cell + cell / 2,
            y = top - 10,
        );
    }
    for (i, label) in ["actual 1", "actual 0"].iter().enumerate() {
        let _ = writeln!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" {FONT} font-size=\"12\" text-anchor=\"end\">{label}</text>",
            x = left - 10,
            y = top + i as u32 * cell + cell / 2 + 4,
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
