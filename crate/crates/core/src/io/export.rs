//! CSV and SVG renderings of zonotopes, sweeps and error reports.
//!
//! All output is a pure function of the input values, so identical inputs
//! give byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use crate::assembly::DofSelection;
use crate::error::{Error, Result};
use crate::io::data::ErrorReport;
use crate::sweep::{SweepOutcome, SweepReport};
use crate::zonotope::Zonotope;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Svg,
}

impl ExportFormat {
    /// `.svg` selects SVG; anything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("svg") => ExportFormat::Svg,
            _ => ExportFormat::Csv,
        }
    }
}

const PALETTE: [&str; 8] = [
    "#e15759", "#59a14f", "#f28e2b", "#b07aa1", "#76b7b2", "#edc948", "#ff9da7", "#9c755f",
];
const HULL_COLOR: &str = "#4e79a7";

/// Vertices (counterclockwise for two DOFs) followed by generators.
pub fn zonotope_csv(z: &Zonotope) -> String {
    let mut out = String::from("kind,index");
    for c in z.dofs().components() {
        out.push(',');
        out.push_str(&c.column());
    }
    out.push('\n');
    let rows = z
        .vertices()
        .iter()
        .map(|v| ("vertex", v))
        .chain(z.generators().iter().map(|g| ("generator", g)));
    let mut counters = [0usize; 2];
    for (kind, values) in rows {
        let idx = &mut counters[usize::from(kind == "generator")];
        let _ = write!(out, "{kind},{idx}");
        for v in values {
            let _ = write!(out, ",{}", clean(*v));
        }
        out.push('\n');
        *idx += 1;
    }
    out
}

fn clean(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 70.0;

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    if span <= 0.0 {
        let half = if lo == 0.0 { 1.0 } else { lo.abs() * 0.5 };
        (lo - half, hi + half)
    } else {
        (lo - 0.08 * span, hi + 0.08 * span)
    }
}

/// Planar zonotope plot: filled hull, generator arrows from the origin, axes.
pub fn zonotope_svg(z: &Zonotope) -> Result<String> {
    if z.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: z.dim(),
        });
    }
    let mut xs = vec![0.0];
    let mut ys = vec![0.0];
    for p in z.vertices().iter().chain(z.generators()) {
        xs.push(p[0]);
        ys.push(p[1]);
    }
    let (x0, x1) = padded(
        xs.iter().cloned().fold(f64::INFINITY, f64::min),
        xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let (y0, y1) = padded(
        ys.iter().cloned().fold(f64::INFINITY, f64::min),
        ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let f = Frame { x0, x1, y0, y1 };
    let [cx, cy] = [z.dofs().components()[0], z.dofs().components()[1]];

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    s.push_str("<defs>\n");
    for (i, color) in PALETTE.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<marker id="arrow{i}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{color}"/></marker>"#
        );
    }
    s.push_str("</defs>\n");
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // frame and zero axes
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{:.2}" height="{:.2}" fill="none" stroke="#888888" stroke-width="1"/>"##,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        s,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbbbbb" stroke-dasharray="4,3"/>"##,
        f.px(x0),
        f.py(0.0),
        f.px(x1),
        f.py(0.0)
    );
    let _ = writeln!(
        s,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbbbbb" stroke-dasharray="4,3"/>"##,
        f.px(0.0),
        f.py(y0),
        f.px(0.0),
        f.py(y1)
    );

    let points: Vec<String> = z
        .vertices()
        .iter()
        .map(|v| format!("{:.2},{:.2}", f.px(v[0]), f.py(v[1])))
        .collect();
    let _ = writeln!(
        s,
        r#"<polygon points="{}" fill="{HULL_COLOR}" fill-opacity="0.3" stroke="{HULL_COLOR}" stroke-width="1.5"/>"#,
        points.join(" ")
    );

    for (i, g) in z.generators().iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2" marker-end="url(#arrow{})"/>"#,
            f.px(0.0),
            f.py(0.0),
            f.px(g[0]),
            f.py(g[1]),
            i % PALETTE.len()
        );
    }

    // tick labels at the frame corners
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{text}</text>"#
        );
    };
    label(
        &mut s,
        MARGIN,
        HEIGHT - MARGIN + 16.0,
        "start",
        format!("{x0:.4}"),
    );
    label(
        &mut s,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 16.0,
        "end",
        format!("{x1:.4}"),
    );
    label(
        &mut s,
        MARGIN - 6.0,
        HEIGHT - MARGIN,
        "end",
        format!("{y0:.4}"),
    );
    label(
        &mut s,
        MARGIN - 6.0,
        MARGIN + 4.0,
        "end",
        format!("{y1:.4}"),
    );
    label(
        &mut s,
        WIDTH / 2.0,
        HEIGHT - MARGIN / 2.0 + 12.0,
        "middle",
        format!("{} ({})", cx.name(), cx.unit()),
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{} ({})</text>"#,
        MARGIN / 3.0,
        HEIGHT / 2.0,
        MARGIN / 3.0,
        HEIGHT / 2.0,
        cy.name(),
        cy.unit()
    );
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn export_zonotope(z: &Zonotope, format: ExportFormat, path: &Path) -> Result<()> {
    let text = match format {
        ExportFormat::Csv => zonotope_csv(z),
        ExportFormat::Svg => zonotope_svg(z)?,
    };
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// One row per grid state; invalid states carry their reason and empty numbers.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out =
        String::from("dl_m,dphi_rad,status,measure,contraction_N,vertices,full_authority");
    for c in report.dofs.components() {
        let _ = write!(out, ",{0}_min,{0}_max", c.column());
    }
    out.push('\n');
    for p in &report.points {
        let _ = write!(out, "{},{}", p.state.dl, p.state.dphi);
        match &p.outcome {
            SweepOutcome::Valid(s) => {
                let measure = s.measure.map(|m| m.to_string()).unwrap_or_default();
                let _ = write!(
                    out,
                    ",{},{measure},{},{},{}",
                    if p.collapsed() { "collapsed" } else { "ok" },
                    clean(s.contraction),
                    s.vertex_count,
                    s.full_authority
                );
                for (lo, hi) in &s.extents {
                    let _ = write!(out, ",{},{}", clean(*lo), clean(*hi));
                }
            }
            SweepOutcome::Invalid { free, reason } => {
                let _ = write!(out, ",invalid:{free}:{reason:?},,,,");
                for _ in report.dofs.components() {
                    out.push_str(",,");
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn error_report_csv(report: &ErrorReport, dofs: &DofSelection) -> String {
    let mut out = String::from("component,rmse,max_abs,count\n");
    for (i, c) in dofs.components().iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            c.column(),
            report.rmse[i],
            report.max_abs[i],
            report.count
        );
    }
    out
}
