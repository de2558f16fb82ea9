//! Deterministic SVG line plots: fixed viewbox, fixed palette, no external
//! renderer. The plot description travels inside the JSON table output, so a
//! re-ingested JSON file reproduces the identical SVG byte for byte.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::error::CliError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 58.0;

const PALETTE: [&str; 6] = [
    "#1a1a1a", "#c0392b", "#2b6cb0", "#2f855a", "#b7791f", "#6b46c1",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    /// Column holding the y values.
    pub column: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub x: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_column: String,
    pub series: Vec<Series>,
    #[serde(default)]
    pub markers: Vec<Marker>,
    #[serde(default)]
    pub shaded_region: Option<(f64, f64)>,
}

fn column_index(columns: &[String], name: &str) -> Result<usize, CliError> {
    columns
        .iter()
        .position(|c| c == name)
        .ok_or_else(|| CliError::config(format!("plot references unknown column \"{name}\"")))
}

/// Pick a 1/2/5 x 10^k tick step giving at most ~6 intervals.
fn nice_step(range: f64) -> f64 {
    let raw = range / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let factor = if norm >= 5.0 {
        5.0
    } else if norm >= 2.0 {
        2.0
    } else {
        1.0
    };
    factor * mag
}

fn tick_label(value: f64, step: f64) -> String {
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor()) as usize
    };
    format!("{value:.decimals$}")
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Render the plot for a table of (columns, rows). NaN cells break the line.
pub fn render_svg(
    columns: &[String],
    rows: &[Vec<f64>],
    spec: &PlotSpec,
) -> Result<String, CliError> {
    let xi = column_index(columns, &spec.x_column)?;
    let series_idx: Vec<usize> = spec
        .series
        .iter()
        .map(|s| column_index(columns, &s.column))
        .collect::<Result<_, _>>()?;

    let xs: Vec<f64> = rows.iter().map(|r| r[xi]).collect();
    let finite_x: Vec<f64> = xs.iter().copied().filter(|v| v.is_finite()).collect();
    if finite_x.is_empty() {
        return Err(CliError::config("plot has no finite x values".into()));
    }
    let x_min = finite_x.iter().cloned().fold(f64::INFINITY, f64::min);
    let x_max = finite_x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for r in rows {
        for &si in &series_idx {
            let y = r[si];
            if y.is_finite() {
                y_min = y_min.min(y);
                y_max = y_max.max(y);
            }
        }
    }
    if !y_min.is_finite() {
        return Err(CliError::config("plot has no finite y values".into()));
    }
    // anchor at zero when the data sits above it; 5% headroom on top
    if y_min > 0.0 {
        y_min = 0.0;
    }
    let y_span = (y_max - y_min).max(1e-300);
    y_max += 0.05 * y_span;
    let y_range = y_max - y_min;
    let x_range = (x_max - x_min).max(1e-300);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        (
            MARGIN_LEFT + (x - x_min) / x_range * plot_w,
            MARGIN_TOP + (1.0 - (y - y_min) / y_range) * plot_h,
        )
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"15\">{}</text>",
        px(WIDTH / 2.0),
        escape(&spec.title)
    );

    // shaded region behind everything else
    if let Some((a, b)) = spec.shaded_region {
        let (lo, hi) = (a.min(b).max(x_min), a.max(b).min(x_max));
        if hi > lo {
            let (x0, _) = to_px(lo, y_min);
            let (x1, _) = to_px(hi, y_min);
            let _ = writeln!(
                svg,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#e8e8e8\"/>",
                px(x0),
                px(MARGIN_TOP),
                px(x1 - x0),
                px(plot_h)
            );
        }
    }

    // axes and ticks
    let x_step = nice_step(x_range);
    let y_step = nice_step(y_range);
    let mut t = (x_min / x_step).ceil() * x_step;
    while t <= x_max + 1e-12 * x_range {
        let (xp, _) = to_px(t, y_min);
        let _ = writeln!(
            svg,
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>",
            px(xp),
            px(MARGIN_TOP),
            px(MARGIN_TOP + plot_h)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">{}</text>",
            px(xp),
            px(MARGIN_TOP + plot_h + 16.0),
            tick_label(t, x_step)
        );
        t += x_step;
    }
    let mut t = (y_min / y_step).ceil() * y_step;
    while t <= y_max + 1e-12 * y_range {
        let (_, yp) = to_px(x_min, t);
        let _ = writeln!(
            svg,
            "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>",
            px(yp),
            px(MARGIN_LEFT),
            px(MARGIN_LEFT + plot_w)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">{}</text>",
            px(MARGIN_LEFT - 6.0),
            px(yp + 4.0),
            tick_label(t, y_step)
        );
        t += y_step;
    }
    let _ = writeln!(
        svg,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#1a1a1a\" stroke-width=\"1\"/>",
        px(MARGIN_LEFT),
        px(MARGIN_TOP),
        px(plot_w),
        px(plot_h)
    );

    // vertical markers
    for m in &spec.markers {
        if m.x < x_min || m.x > x_max {
            continue;
        }
        let (xp, _) = to_px(m.x, y_min);
        let _ = writeln!(
            svg,
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#666666\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>",
            px(xp),
            px(MARGIN_TOP),
            px(MARGIN_TOP + plot_h)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\" fill=\"#444444\">{}</text>",
            px(xp),
            px(MARGIN_TOP - 6.0),
            escape(&m.label)
        );
    }

    // data polylines; NaN gaps split the line
    for (k, &si) in series_idx.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for r in rows {
            let (x, y) = (r[xi], r[si]);
            if x.is_finite() && y.is_finite() {
                segments.last_mut().unwrap().push(to_px(x, y));
            } else if !segments.last().unwrap().is_empty() {
                segments.push(Vec::new());
            }
        }
        for seg in segments.iter().filter(|s| s.len() > 1) {
            let pts: Vec<String> = seg
                .iter()
                .map(|(x, y)| format!("{},{}", px(*x), px(*y)))
                .collect();
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\"/>",
                pts.join(" ")
            );
        }
    }

    // legend, top-right inside the frame
    for (k, s) in spec.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let y = MARGIN_TOP + 18.0 + 18.0 * k as f64;
        let x_text = WIDTH - MARGIN_RIGHT - 12.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2.5\"/>",
            px(x_text - 150.0),
            px(y - 4.0),
            px(x_text - 128.0),
            px(y - 4.0)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"start\" font-family=\"monospace\" font-size=\"12\">{}</text>",
            px(x_text - 122.0),
            px(y),
            escape(&s.label)
        );
    }

    // axis labels
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\">{}</text>",
        px(MARGIN_LEFT + plot_w / 2.0),
        px(HEIGHT - 14.0),
        escape(&spec.x_label)
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\" transform=\"rotate(-90 18 {})\">{}</text>",
        px(MARGIN_TOP + plot_h / 2.0),
        px(MARGIN_TOP + plot_h / 2.0),
        escape(&spec.y_label)
    );

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
