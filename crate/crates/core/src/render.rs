//! Deterministic SVG rendering for audit heatmaps and frontier scatter plots.
//!
//! All coordinates and colors are emitted with fixed-precision formatting,
//! so rendering the same input twice yields byte-identical output. The SVG
//! is self-contained: no external stylesheets, fonts, or images.

use crate::error::{Error, Result};
use crate::frontier::FrontierPoint;

/// A grid of Δ_Adv values to draw as a colored matrix.
///
/// `values` is row-major with `row_labels.len() * col_labels.len()` entries.
/// The color scale diverges around zero: positive cells shade toward red,
/// negative cells toward blue, and the mapping is monotone in the value.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapSpec {
    pub title: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Vec<f64>,
}

impl HeatmapSpec {
    pub fn new(
        title: impl Into<String>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_labels.is_empty() || col_labels.is_empty() {
            return Err(Error::EmptyInput("heatmap labels"));
        }
        if values.len() != row_labels.len() * col_labels.len() {
            return Err(Error::AxisMismatch(format!(
                "heatmap grid wants {} values, got {}",
                row_labels.len() * col_labels.len(),
                values.len()
            )));
        }
        Ok(Self {
            title: title.into(),
            row_labels,
            col_labels,
            values,
        })
    }
}

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(ch),
        }
    }
    out
}

const INK: &str = "#1a1a1a";
const FAINT: &str = "#666666";
const NEUTRAL: [u8; 3] = [247, 247, 247];
const RED: [u8; 3] = [178, 24, 43];
const BLUE: [u8; 3] = [33, 102, 172];

fn lerp(a: [u8; 3], b: [u8; 3], t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0);
    let mix = |x: u8, y: u8| (f64::from(x) + (f64::from(y) - f64::from(x)) * t).round() as u8;
    [mix(a[0], b[0]), mix(a[1], b[1]), mix(a[2], b[2])]
}

/// Diverging color for `value` on a scale anchored at 0 with half-range
/// `max_abs`; red side for positive values, blue side for negative.
fn diverging_color(value: f64, max_abs: f64) -> [u8; 3] {
    if max_abs <= 0.0 {
        return NEUTRAL;
    }
    let t = (value / max_abs).clamp(-1.0, 1.0);
    if t >= 0.0 {
        lerp(NEUTRAL, RED, t)
    } else {
        lerp(NEUTRAL, BLUE, -t)
    }
}

fn hex(rgb: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2])
}

/// Approximate width of `n` characters of 12px monospace text.
fn text_width(n: usize) -> f64 {
    n as f64 * 7.3
}

/// Renders the heatmap to SVG bytes.
///
/// Cells carry their value to three decimals; non-finite cells render gray
/// with a textual marker and do not influence the color scale. A legend bar
/// under the grid shows the scale endpoints.
pub fn render_heatmap_svg(spec: &HeatmapSpec) -> Result<String> {
    let rows = spec.row_labels.len();
    let cols = spec.col_labels.len();

    let max_abs = spec
        .values
        .iter()
        .filter(|v| v.is_finite())
        .fold(0.0_f64, |m, v| m.max(v.abs()));

    let cell_w = 86.0;
    let cell_h = 42.0;
    let row_label_w = spec
        .row_labels
        .iter()
        .map(|l| text_width(l.chars().count()))
        .fold(60.0_f64, f64::max)
        + 18.0;
    let title_h = if spec.title.is_empty() { 10.0 } else { 34.0 };
    let col_label_h = 26.0;
    let legend_h = 64.0;
    let grid_w = cell_w * cols as f64;
    let grid_h = cell_h * rows as f64;
    let legend_w = grid_w.max(200.0);
    let width = row_label_w + grid_w.max(legend_w) + 24.0;
    let height = title_h + col_label_h + grid_h + legend_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"DejaVu Sans Mono, Menlo, monospace\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{width:.0}\" height=\"{height:.0}\" fill=\"#ffffff\"/>\n"
    ));
    if !spec.title.is_empty() {
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"22\" font-size=\"15\" fill=\"{INK}\">{}</text>\n",
            row_label_w,
            esc(&spec.title)
        ));
    }

    for (j, label) in spec.col_labels.iter().enumerate() {
        let x = row_label_w + cell_w * (j as f64 + 0.5);
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"{INK}\" \
             text-anchor=\"middle\">{}</text>\n",
            title_h + col_label_h - 8.0,
            esc(label)
        ));
    }

    for (i, label) in spec.row_labels.iter().enumerate() {
        let y = title_h + col_label_h + cell_h * (i as f64 + 0.5) + 4.0;
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{y:.1}\" font-size=\"12\" fill=\"{INK}\" \
             text-anchor=\"end\">{}</text>\n",
            row_label_w - 8.0,
            esc(label)
        ));
    }

    for i in 0..rows {
        for j in 0..cols {
            let v = spec.values[i * cols + j];
            let x = row_label_w + cell_w * j as f64;
            let y = title_h + col_label_h + cell_h * i as f64;
            let (fill, label, label_fill) = if v.is_finite() {
                let t = if max_abs > 0.0 {
                    (v / max_abs).abs()
                } else {
                    0.0
                };
                let ink = if t > 0.55 { "#ffffff" } else { INK };
                (hex(diverging_color(v, max_abs)), format!("{v:.3}"), ink)
            } else if v.is_nan() {
                ("#d9d9d9".to_string(), "nan".to_string(), INK)
            } else if v > 0.0 {
                ("#d9d9d9".to_string(), "inf".to_string(), INK)
            } else {
                ("#d9d9d9".to_string(), "-inf".to_string(), INK)
            };
            svg.push_str(&format!(
                "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{cell_w:.1}\" height=\"{cell_h:.1}\" \
                 fill=\"{fill}\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n"
            ));
            svg.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"{label_fill}\" \
                 text-anchor=\"middle\">{label}</text>\n",
                x + cell_w / 2.0,
                y + cell_h / 2.0 + 4.0
            ));
        }
    }

    let legend_y = title_h + col_label_h + grid_h + 22.0;
    let steps = 64;
    let step_w = legend_w / steps as f64;
    for s in 0..steps {
        let frac = (s as f64 + 0.5) / steps as f64;
        let v = max_abs * (2.0 * frac - 1.0);
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{legend_y:.1}\" width=\"{:.2}\" height=\"12\" fill=\"{}\"/>\n",
            row_label_w + step_w * s as f64,
            step_w + 0.05,
            hex(diverging_color(v, max_abs))
        ));
    }
    svg.push_str(&format!(
        "<rect x=\"{row_label_w:.1}\" y=\"{legend_y:.1}\" width=\"{legend_w:.2}\" height=\"12\" \
         fill=\"none\" stroke=\"{FAINT}\" stroke-width=\"0.5\"/>\n"
    ));
    for (anchor, frac, v) in [
        ("start", 0.0, -max_abs),
        ("middle", 0.5, 0.0),
        ("end", 1.0, max_abs),
    ] {
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" fill=\"{FAINT}\" \
             text-anchor=\"{anchor}\">{v:.3}</text>\n",
            row_label_w + legend_w * frac,
            legend_y + 26.0
        ));
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders a frontier scatter: one dot per point at (gamma_lpp,
/// utility_iinf), with the y=x diagonal drawn across the plot. Points on or
/// below the diagonal are the feasible ones.
pub fn render_frontier_svg(points: &[FrontierPoint], title: &str) -> Result<String> {
    let margin_l = 64.0;
    let margin_r = 20.0;
    let margin_t = if title.is_empty() { 16.0 } else { 36.0 };
    let margin_b = 52.0;
    let plot = 440.0;
    let width = margin_l + plot + margin_r;
    let height = margin_t + plot + margin_b;

    let mut max_v = 0.0_f64;
    for p in points {
        if !p.gamma_lpp.is_finite() || !p.utility_iinf.is_finite() {
            return Err(Error::Domain(
                "frontier plot requires finite coordinates".into(),
            ));
        }
        max_v = max_v.max(p.gamma_lpp).max(p.utility_iinf);
    }
    let axis_max = if max_v > 0.0 { max_v * 1.08 } else { 1.0 };

    let to_x = |v: f64| margin_l + v / axis_max * plot;
    let to_y = |v: f64| margin_t + plot - v / axis_max * plot;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"DejaVu Sans Mono, Menlo, monospace\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{width:.0}\" height=\"{height:.0}\" fill=\"#ffffff\"/>\n"
    ));
    if !title.is_empty() {
        svg.push_str(&format!(
            "<text x=\"{margin_l:.1}\" y=\"22\" font-size=\"15\" fill=\"{INK}\">{}</text>\n",
            esc(title)
        ));
    }
    svg.push_str(&format!(
        "<rect x=\"{margin_l:.1}\" y=\"{margin_t:.1}\" width=\"{plot:.1}\" height=\"{plot:.1}\" \
         fill=\"none\" stroke=\"{FAINT}\" stroke-width=\"1\"/>\n"
    ));

    let ticks = 5;
    for t in 0..=ticks {
        let v = axis_max * t as f64 / ticks as f64;
        let x = to_x(v);
        let y = to_y(v);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.1}\" x2=\"{x:.2}\" y2=\"{:.1}\" \
             stroke=\"{FAINT}\" stroke-width=\"1\"/>\n",
            margin_t + plot,
            margin_t + plot + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.1}\" font-size=\"11\" fill=\"{FAINT}\" \
             text-anchor=\"middle\">{v:.2}</text>\n",
            margin_t + plot + 20.0
        ));
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.2}\" x2=\"{margin_l:.1}\" y2=\"{y:.2}\" \
             stroke=\"{FAINT}\" stroke-width=\"1\"/>\n",
            margin_l - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.2}\" font-size=\"11\" fill=\"{FAINT}\" \
             text-anchor=\"end\">{v:.2}</text>\n",
            margin_l - 9.0,
            y + 4.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"{INK}\" \
         text-anchor=\"middle\">gamma_lpp (bits)</text>\n",
        margin_l + plot / 2.0,
        margin_t + plot + 42.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" font-size=\"12\" fill=\"{INK}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {:.1})\">utility_iinf (bits)</text>\n",
        margin_t + plot / 2.0,
        margin_t + plot / 2.0
    ));

    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888888\" \
         stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n",
        to_x(0.0),
        to_y(0.0),
        to_x(axis_max),
        to_y(axis_max)
    ));

    for p in points {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.5\" fill=\"#2c6fbb\" \
             fill-opacity=\"0.75\"/>\n",
            to_x(p.gamma_lpp),
            to_y(p.utility_iinf)
        ));
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
