use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{model_names, ConsolidatedRow, ALIGNED_THRESHOLD, INTERPRETABLE_THRESHOLD};
use crate::error::AnalysisError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const MAX_X_LABELS: usize = 30;

const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
const DASHES: [&str; 3] = ["none", "6 3", "2 2"];

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Renders consolidated maxima as a standalone SVG line chart: one polyline
/// per model over question ids, fixed 0..1 vertical axis, dashed guides at
/// the band thresholds, and a legend. Output depends only on `rows`.
pub fn render_chart(rows: &[ConsolidatedRow]) -> Result<String, AnalysisError> {
    if rows.is_empty() {
        return Err(AnalysisError::EmptyChart);
    }
    let models = model_names(rows);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let step = plot_w / rows.len() as f64;
    let x = |i: usize| LEFT + (i as f64 + 0.5) * step;
    let y = |s: f64| TOP + (1.0 - s.clamp(0.0, 1.0)) * plot_h;

    let mut svg = String::new();
    // writing into a String cannot fail
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(svg, r##"<g class="axes" stroke="#333" stroke-width="1">"##);
    let _ = writeln!(svg, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}"/>"#, TOP + plot_h);
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="y-ticks" text-anchor="end">"#);
    for tick in 0..=5 {
        let value = tick as f64 / 5.0;
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}">{value:.1}</text>"##,
            LEFT,
            y(value),
            LEFT + plot_w,
            y(value),
            LEFT - 6.0,
            y(value) + 4.0
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r##"<g class="thresholds" stroke="#999" stroke-dasharray="4 4">"##);
    for threshold in [INTERPRETABLE_THRESHOLD, ALIGNED_THRESHOLD] {
        let _ = writeln!(
            svg,
            r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" data-threshold="{threshold:.2}"/>"#,
            y(threshold),
            LEFT + plot_w,
            y(threshold)
        );
    }
    let _ = writeln!(svg, "</g>");

    let label_every = rows.len().div_ceil(MAX_X_LABELS);
    let _ = writeln!(svg, r#"<g class="x-ticks" text-anchor="middle">"#);
    for (i, row) in rows.iter().enumerate().filter(|(i, _)| i % label_every == 0) {
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x(i), TOP + plot_h + 16.0, row.question_id);
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">question</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">SBC score</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (k, model) in models.iter().enumerate() {
        let points: Vec<String> = rows
            .iter()
            .enumerate()
            .filter_map(|(i, row)| row.per_model_max.get(model).map(|s| format!("{:.2},{:.2}", x(i), y(*s))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="series series-{k}" data-model="{}" fill="none" stroke="{}" stroke-width="2" stroke-dasharray="{}" points="{}"/>"#,
            escape(model),
            COLORS[k % COLORS.len()],
            DASHES[(k / COLORS.len()) % DASHES.len()],
            points.join(" ")
        );
    }

    let _ = writeln!(svg, r#"<g class="legend">"#);
    for (k, model) in models.iter().enumerate() {
        let ly = TOP + 10.0 + k as f64 * 18.0;
        let lx = LEFT + plot_w + 16.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2" stroke-dasharray="{}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 24.0,
            COLORS[k % COLORS.len()],
            DASHES[(k / COLORS.len()) % DASHES.len()],
            lx + 30.0,
            ly + 4.0,
            escape(model)
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes [`render_chart`] output to `path`.
pub fn emit_chart(rows: &[ConsolidatedRow], path: impl AsRef<Path>) -> Result<(), AnalysisError> {
    let svg = render_chart(rows)?;
    fs::write(path, svg)?;
    Ok(())
}
