//! Minimal standalone SVG renderings of diagrams, silhouettes and sweeps.

use std::fmt::Write as _;
use std::path::Path;

use super::eval::SweepReport;
use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;
use crate::summaries::SummaryVector;

const W: f64 = 480.0;
const H: f64 = 360.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

pub enum PlotObject<'a> {
    Diagram(&'a PersistenceDiagram),
    /// One labeled silhouette per class.
    Silhouettes(&'a [(String, SummaryVector)]),
    Sweep(&'a SweepReport),
}

/// Linear map from a data range onto a pixel range.
#[derive(Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn new(lo: f64, hi: f64, px_lo: f64, px_hi: f64) -> Self {
        let hi = if hi > lo { hi } else { lo + 1.0 };
        Self { lo, hi, px_lo, px_hi }
    }

    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

fn x_axis(lo: f64, hi: f64) -> Axis {
    Axis::new(lo, hi, MARGIN, W - MARGIN)
}

fn y_axis(lo: f64, hi: f64) -> Axis {
    Axis::new(lo, hi, H - MARGIN, MARGIN)
}

fn header(out: &mut String, title: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">
<rect width="{W}" height="{H}" fill="white"/>
<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>
"#,
        W / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(out: &mut String, x: Axis, y: Axis, x_label: &str, y_label: &str) {
    let (x0, y0) = (x.px_lo, y.px_lo);
    let _ = writeln!(
        out,
        r#"<g class="axes" stroke="black"><line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{}"/></g>"#,
        x.px_hi, y.px_hi
    );
    for (v, anchor) in [(x.lo, "start"), (x.hi, "end")] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="{anchor}">{}</text>"#,
            x.map(v),
            y0 + 15.0,
            fmt_tick(v)
        );
    }
    for v in [y.lo, y.hi] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 4.0,
            y.map(v) + 4.0,
            fmt_tick(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x.px_lo + x.px_hi) / 2.0,
        H - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{0}" text-anchor="middle" transform="rotate(-90 14 {0})">{1}</text>"#,
        (y.px_lo + y.px_hi) / 2.0,
        escape(y_label)
    );
}

fn fmt_tick(v: f64) -> String {
    format!("{:.3}", v).trim_end_matches('0').trim_end_matches('.').to_string()
}

fn polyline(out: &mut String, pts: impl Iterator<Item = (f64, f64)>, color: &str, extra: &str) {
    let mut attr = String::new();
    for (px, py) in pts {
        let _ = write!(attr, "{px:.2},{py:.2} ");
    }
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{extra} points="{}"/>"#,
        attr.trim_end()
    );
}

pub fn diagram_svg(diag: &PersistenceDiagram) -> String {
    let top = diag
        .pairs
        .iter()
        .map(|p| p.1)
        .chain(diag.essential.iter().copied())
        .chain(diag.pairs.iter().map(|p| p.0))
        .fold(0.0, f64::max)
        * 1.05;
    let (x, y) = (x_axis(0.0, top), y_axis(0.0, top));
    let mut out = String::new();
    header(&mut out, &format!("H{} persistence diagram", diag.dim));
    axes(&mut out, x, y, "birth", "death");
    let _ = writeln!(
        out,
        r#"<line class="diagonal" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        x.map(x.lo),
        y.map(y.lo),
        x.map(x.hi),
        y.map(y.hi)
    );
    for &(b, d) in &diag.pairs {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
            x.map(b),
            y.map(d),
            COLORS[0]
        );
    }
    // essential classes drawn on the top edge
    for &b in &diag.essential {
        let _ = writeln!(
            out,
            r#"<path class="essential" d="M {:.2} {:.2} l -4 7 h 8 z" fill="{}"/>"#,
            x.map(b),
            y.px_hi,
            COLORS[1]
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn silhouettes_svg(curves: &[(String, SummaryVector)]) -> String {
    let t_lo = curves.iter().map(|c| c.1.grid.t_min).fold(f64::INFINITY, f64::min);
    let t_hi = curves.iter().map(|c| c.1.grid.t_max).fold(f64::NEG_INFINITY, f64::max);
    let v_hi = curves.iter().flat_map(|c| c.1.values.iter().copied()).fold(0.0, f64::max);
    let (x, y) = if curves.is_empty() {
        (x_axis(0.0, 1.0), y_axis(0.0, 1.0))
    } else {
        (x_axis(t_lo, t_hi), y_axis(0.0, v_hi * 1.05))
    };
    let mut out = String::new();
    header(&mut out, "silhouettes");
    axes(&mut out, x, y, "t", "silhouette");
    for (i, (label, s)) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts = s
            .grid
            .samples()
            .zip(&s.values)
            .map(|(t, v)| (x.map(t), y.map(*v)));
        polyline(&mut out, pts, color, "");
        legend_entry(&mut out, i, label, color);
    }
    out.push_str("</svg>\n");
    out
}

fn legend_entry(out: &mut String, i: usize, label: &str, color: &str) {
    let ly = MARGIN + 14.0 * i as f64;
    let lx = W - MARGIN - 90.0;
    let _ = writeln!(
        out,
        r#"<g class="legend"><line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text></g>"#,
        lx + 16.0,
        lx + 20.0,
        ly + 4.0,
        escape(label)
    );
}

/// Accuracy against the left axis; cumulative explained variance, when
/// recorded, against a second axis on the right.
pub fn sweep_svg(report: &SweepReport) -> String {
    let dims: Vec<f64> = report.dims.iter().map(|&k| k as f64).collect();
    let d_lo = dims.iter().copied().fold(f64::INFINITY, f64::min);
    let d_hi = dims.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let x = x_axis(d_lo, d_hi);
    let y = y_axis(0.0, 1.0);
    let mut out = String::new();
    header(&mut out, &format!("{} sweep, {}", report.config.reduction, report.config.classifier));
    axes(&mut out, x, y, "dimension", "accuracy");
    let _ = writeln!(
        out,
        r#"<g class="axis-right" stroke="{0}"><line x1="{1}" y1="{2}" x2="{1}" y2="{3}"/></g><text x="{4}" y="{5}" fill="{0}" text-anchor="middle" transform="rotate(90 {4} {5})">explained variance</text>"#,
        COLORS[1],
        x.px_hi,
        y.px_lo,
        y.px_hi,
        W - 14.0,
        (y.px_lo + y.px_hi) / 2.0
    );
    for v in [0.0, 1.0] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" fill="{}">{}</text>"#,
            x.px_hi + 4.0,
            y.map(v) + 4.0,
            COLORS[1],
            fmt_tick(v)
        );
    }
    let acc = dims.iter().zip(&report.mean).map(|(k, a)| (x.map(*k), y.map(*a)));
    polyline(&mut out, acc, COLORS[0], "");
    for ((k, m), s) in dims.iter().zip(&report.mean).zip(&report.std) {
        let _ = writeln!(
            out,
            r#"<line class="errorbar" x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="{3}"/>"#,
            x.map(*k),
            y.map((m - s).max(0.0)),
            y.map((m + s).min(1.0)),
            COLORS[0]
        );
    }
    legend_entry(&mut out, 0, "accuracy", COLORS[0]);
    if let Some(var) = &report.cumulative_variance {
        let pts = dims.iter().zip(var).map(|(k, v)| (x.map(*k), y.map(*v)));
        polyline(&mut out, pts, COLORS[1], r#" stroke-dasharray="5 3""#);
        legend_entry(&mut out, 1, "cum. variance", COLORS[1]);
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_svg(object: &PlotObject<'_>) -> String {
    match object {
        PlotObject::Diagram(d) => diagram_svg(d),
        PlotObject::Silhouettes(s) => silhouettes_svg(s),
        PlotObject::Sweep(r) => sweep_svg(r),
    }
}

pub fn plot_svg(object: &PlotObject<'_>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_svg(object)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{EvalConfig, Reduction};
    use crate::summaries::{silhouette, Grid};

    #[test]
    fn empty_diagram_has_axes_only() {
        let svg = diagram_svg(&PersistenceDiagram::empty(0));
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"class="axes""#));
        assert!(!svg.contains("<circle"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn diagram_points_and_diagonal() {
        let d = PersistenceDiagram::new(0, vec![(0.0, 1.0), (0.0, 2.5)], vec![0.0]).unwrap();
        let svg = diagram_svg(&d);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains(r#"class="diagonal""#));
        assert!(svg.contains(r#"class="essential""#));
    }

    #[test]
    fn three_silhouettes_three_polylines() {
        let grid = Grid::new(0.0, 3.0, 50).unwrap();
        let curves: Vec<(String, SummaryVector)> = (1..=3)
            .map(|i| {
                let d = PersistenceDiagram::new(0, vec![(0.0, i as f64)], vec![]).unwrap();
                (format!("c{i}"), silhouette(&d, &grid).unwrap())
            })
            .collect();
        let svg = silhouettes_svg(&curves);
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert_eq!(svg.matches(r#"class="legend""#).count(), 3);
    }

    #[test]
    fn sweep_has_two_axes() {
        let r = SweepReport {
            config: EvalConfig {
                reduction: Reduction::Pca(2),
                ..EvalConfig::default()
            },
            dims: vec![2, 3, 4],
            accuracies: vec![vec![0.5], vec![0.7], vec![0.8]],
            mean: vec![0.5, 0.7, 0.8],
            std: vec![0.0; 3],
            cumulative_variance: Some(vec![0.4, 0.6, 0.7]),
            kept_features: None,
        };
        let svg = sweep_svg(&r);
        assert!(svg.contains(r#"class="axes""#));
        assert!(svg.contains(r#"class="axis-right""#));
        assert_eq!(svg.matches("<polyline").count(), 2);
    }

    #[test]
    fn writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.svg");
        plot_svg(&PlotObject::Diagram(&PersistenceDiagram::empty(0)), &path).unwrap();
        assert!(std::fs::read_to_string(&path).unwrap().contains("<svg"));
        assert!(plot_svg(&PlotObject::Diagram(&PersistenceDiagram::empty(0)), dir.path().join("no/x.svg")).is_err());
    }
}
