//! Dependency-free SVG rendering of efficiency histograms.
//!
//! The plot-data CSV files are the normative output; the SVG is a
//! convenience view. One `rect` per bin, one `polyline` for the fitted
//! curve when present, nothing else rectangular.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analysis::EfficiencyHistogram;
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 16.0;
const MARGIN_BOTTOM: f64 = 56.0;
const CURVE_SAMPLES: usize = 256;

/// Renders the histogram as a standalone SVG with bars per bin, the fitted
/// curve when present, and labeled axes.
pub fn render_histogram_svg(hist: &EfficiencyHistogram, path: &Path) -> Result<()> {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h; // baseline

    let max_count = hist.counts().iter().copied().max().unwrap_or(0) as f64;
    let max_fit = hist
        .fit()
        .map(|f| f.amplitude.abs().max(0.0))
        .unwrap_or(0.0);
    let y_max = (max_count.max(max_fit) * 1.05).max(1.0);

    let x_of =
        |value: f64| x0 + (value - hist.bin_min()) / (hist.bin_max() - hist.bin_min()) * plot_w;
    let y_of = |count: f64| y0 - (count / y_max) * plot_h;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .expect("string write cannot fail");

    // bars: exactly one rect per bin, zero-count bins included
    for (k, &count) in hist.counts().iter().enumerate() {
        let left = x_of(hist.bin_min() + k as f64 * hist.bin_width());
        let right = x_of(hist.bin_min() + (k as f64 + 1.0) * hist.bin_width());
        let top = y_of(count as f64);
        writeln!(
            svg,
            r##"  <rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#4a90d9" stroke="none"/>"##,
            left,
            top,
            right - left,
            y0 - top
        )
        .expect("string write cannot fail");
    }

    // fitted curve
    if let Some(fit) = hist.fit() {
        let mut points = String::new();
        for i in 0..CURVE_SAMPLES {
            let x = hist.bin_min()
                + (hist.bin_max() - hist.bin_min()) * i as f64 / (CURVE_SAMPLES - 1) as f64;
            let y = y_of(fit.evaluate(x)).clamp(MARGIN_TOP, y0);
            if i > 0 {
                points.push(' ');
            }
            write!(points, "{:.2},{:.2}", x_of(x), y).expect("string write cannot fail");
        }
        writeln!(
            svg,
            r##"  <polyline points="{points}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##
        )
        .expect("string write cannot fail");
    }

    // axes
    writeln!(
        svg,
        r#"  <line x1="{x0}" y1="{y0}" x2="{:.2}" y2="{y0}" stroke="black" stroke-width="1"/>"#,
        x0 + plot_w
    )
    .expect("string write cannot fail");
    writeln!(
        svg,
        r#"  <line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black" stroke-width="1"/>"#
    )
    .expect("string write cannot fail");

    // x tick labels at range ends and midpoint
    for frac in [0.0, 0.5, 1.0] {
        let value = hist.bin_min() + frac * (hist.bin_max() - hist.bin_min());
        writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{value}</text>"#,
            x_of(value),
            y0 + 18.0
        )
        .expect("string write cannot fail");
    }
    // y tick labels at zero and the axis maximum
    writeln!(
        svg,
        r#"  <text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">0</text>"#,
        x0 - 6.0,
        y0 + 4.0
    )
    .expect("string write cannot fail");
    writeln!(
        svg,
        r#"  <text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{:.0}</text>"#,
        x0 - 6.0,
        MARGIN_TOP + 4.0,
        y_max
    )
    .expect("string write cannot fail");

    writeln!(
        svg,
        r#"  <text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">FRET Efficiency</text>"#,
        x0 + plot_w / 2.0,
        HEIGHT - 12.0
    )
    .expect("string write cannot fail");
    writeln!(
        svg,
        r#"  <text x="16" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 16 {:.2})">Events</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    )
    .expect("string write cannot fail");

    svg.push_str("</svg>\n");
    fs::write(path, svg).map_err(|source| Error::WriteFailed {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{build_histogram, fit_gaussian};

    fn sample_histogram(with_fit: bool) -> EfficiencyHistogram {
        let mut values = Vec::new();
        for k in 0..50 {
            let c = (k as f64 + 0.5) * 0.02;
            let n = (80.0 * (-(c - 0.6f64).powi(2) / 0.005).exp()).round() as usize;
            values.extend(std::iter::repeat_n(c, n));
        }
        let hist = build_histogram(&values, 0.0, 1.0, 0.02).unwrap();
        if with_fit {
            let fit = fit_gaussian(&hist).unwrap();
            hist.with_fit(fit)
        } else {
            hist
        }
    }

    #[test]
    fn svg_is_well_formed_with_one_rect_per_bin() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.svg");
        render_histogram_svg(&sample_histogram(false), &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        let rects = doc.descendants().filter(|n| n.has_tag_name("rect")).count();
        assert_eq!(rects, 50);
        let polylines = doc
            .descendants()
            .filter(|n| n.has_tag_name("polyline"))
            .count();
        assert_eq!(polylines, 0);
        assert!(text.contains("FRET Efficiency"));
        assert!(text.contains("Events"));
    }

    #[test]
    fn fitted_histogram_has_exactly_one_polyline() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.svg");
        render_histogram_svg(&sample_histogram(true), &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        let polylines = doc
            .descendants()
            .filter(|n| n.has_tag_name("polyline"))
            .count();
        assert_eq!(polylines, 1);
    }
}
