//! Minimal deterministic SVG line plots.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geometry::Point2;

const SIZE: f64 = 640.0;
const PAD: f64 = 48.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub points: Vec<Point2>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub title: String,
    pub curves: Vec<Curve>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders the curves as polylines on a common, equal-aspect frame that
/// always includes the origin.
pub fn emit_plot(data: &Dataset) -> Result<String> {
    if data.curves.is_empty() || data.curves.iter().any(|c| c.points.is_empty()) {
        return Err(Error::EmptyDataset);
    }
    let pts = data.curves.iter().flat_map(|c| c.points.iter());
    if pts.clone().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::InvalidInput("non-finite point in dataset".into()));
    }
    let (mut x1, mut y1) = (0.0f64, 0.0f64);
    for p in pts {
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let (mut x0, mut y0) = (0.0f64, 0.0f64);
    for p in data.curves.iter().flat_map(|c| c.points.iter()) {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SIZE - 2.0 * PAD) / span;
    let sx = |x: f64| PAD + (x - x0) * scale;
    let sy = |y: f64| SIZE - PAD - (y - y0) * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    if !data.title.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{PAD}" y="{:.1}" font-family="sans-serif" font-size="14">{}</text>"#,
            PAD * 0.5,
            escape(&data.title)
        );
    }
    let _ = writeln!(
        out,
        r##"<g stroke="#888" stroke-width="1"><line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/><line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/></g>"##,
        sx(x0), sy(0.0), sx(x0 + span), sy(0.0), sx(0.0), sy(y0), sx(0.0), sy(y0 + span)
    );
    for (i, c) in data.curves.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        for (k, p) in c.points.iter().enumerate() {
            let _ = write!(d, "{}{:.3} {:.3}", if k == 0 { "M" } else { " L" }, sx(p.x), sy(p.y));
        }
        let _ = writeln!(out, r#"<path d="{d}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#);
        let ly = PAD + 18.0 * i as f64 + 12.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{ly:.1}" font-family="sans-serif" font-size="12" fill="{colour}">{}</text>"#,
            SIZE - PAD - 160.0,
            escape(&c.label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_path_per_curve() {
        let d = Dataset {
            title: "t".into(),
            curves: vec![Curve { label: "seg".into(), points: vec![Point2::new(0.0, 1.0), Point2::new(1.0, 0.0)] }],
        };
        let svg = emit_plot(&d).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg, emit_plot(&d).unwrap());
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn rejects_empty() {
        assert_eq!(emit_plot(&Dataset::default()), Err(Error::EmptyDataset));
        let d = Dataset { title: String::new(), curves: vec![Curve { label: "x".into(), points: vec![] }] };
        assert_eq!(emit_plot(&d), Err(Error::EmptyDataset));
    }

    #[test]
    fn escapes_labels() {
        let d = Dataset {
            title: "a<b".into(),
            curves: vec![Curve { label: "x&y".into(), points: vec![Point2::new(1.0, 1.0)] }],
        };
        let svg = emit_plot(&d).unwrap();
        assert!(svg.contains("a&lt;b") && svg.contains("x&amp;y"));
    }
}
