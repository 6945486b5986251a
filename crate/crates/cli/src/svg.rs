//! Histogram plus KDE overlay as a plain SVG document.

use std::fmt::Write;

use catlab_core::stats::{Histogram, KdeCurve};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 48.0;

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_hi: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x_lo) / (self.x_hi - self.x_lo) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - v / self.y_hi * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Density-scaled bars (total area 1) with the KDE drawn on top.
pub fn histogram_with_kde(hist: &Histogram, curve: &KdeCurve, title: &str) -> String {
    let densities = hist.densities();
    let x_lo = hist.lo.min(curve.xs.first().copied().unwrap_or(hist.lo));
    let x_hi = hist.hi.max(curve.xs.last().copied().unwrap_or(hist.hi));
    let y_hi = densities
        .iter()
        .chain(curve.ys.iter())
        .copied()
        .fold(0.0, f64::max)
        * 1.05;
    let frame = Frame {
        x_lo,
        x_hi,
        y_hi: if y_hi > 0.0 { y_hi } else { 1.0 },
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    let width = hist.bin_width();
    for (k, d) in densities.iter().enumerate() {
        let left = hist.lo + k as f64 * width;
        let (x0, x1) = (frame.x(left), frame.x(left + width));
        let (top, base) = (frame.y(*d), frame.y(0.0));
        let _ = writeln!(
            svg,
            r##"<rect class="bar" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#9ecae1" stroke="#3182bd" stroke-width="0.5"/>"##,
            x0,
            top,
            x1 - x0,
            base - top
        );
    }

    let points: Vec<String> = curve
        .xs
        .iter()
        .zip(&curve.ys)
        .map(|(x, y)| format!("{:.3},{:.3}", frame.x(*x), frame.y(*y)))
        .collect();
    let _ = writeln!(
        svg,
        r##"<polyline class="kde" fill="none" stroke="#de2d26" stroke-width="1.5" points="{}"/>"##,
        points.join(" ")
    );

    let axis_y = frame.y(0.0);
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN}" y1="{axis_y:.3}" x2="{:.3}" y2="{axis_y:.3}" stroke="black"/>"#,
        WIDTH - MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{axis_y:.3}" stroke="black"/>"#
    );
    for (v, anchor) in [(x_lo, "start"), (x_hi, "end")] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{v:.2}</text>"#,
            frame.x(v),
            axis_y + 16.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.3}" y="{MARGIN}" text-anchor="end" font-family="sans-serif" font-size="11">{:.3}</text>"#,
        MARGIN - 4.0,
        frame.y_hi
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use catlab_core::stats::{histogram, kde};

    #[test]
    fn one_bar_per_bin_and_one_polyline() {
        let sample: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64 / 25.0 - 2.0).collect();
        let h = histogram(&sample, 20).unwrap();
        let doc = histogram_with_kde(&h, &kde(&sample).unwrap(), "a < b");
        assert_eq!(doc.matches(r#"class="bar""#).count(), 20);
        assert_eq!(doc.matches("<polyline").count(), 1);
        assert!(doc.contains("a &lt; b"));
        assert!(doc.ends_with("</svg>\n"));
    }
}
