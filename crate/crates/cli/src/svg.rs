//! Static SVG 1.1 figures. Every coordinate is printed with a fixed number
//! of decimals, so identical inputs give byte-identical documents.

use std::fmt::Write;

use minkowski_cover::{gauge, BallParameter, Point2};

use crate::format::number;

const PANEL: f64 = 420.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 48.0;

pub const PALETTE: [&str; 4] = ["#1f5fa8", "#c8482c", "#3a8a3a", "#7a4b9a"];

fn c(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Maps data coordinates into a panel's plot rectangle.
struct Frame {
    x: (f64, f64),
    y: (f64, f64),
    left: f64,
    top: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        Frame {
            x,
            y,
            left: MARGIN_LEFT,
            top: MARGIN_TOP,
            width: PANEL - MARGIN_LEFT - MARGIN_RIGHT,
            height: PANEL - MARGIN_TOP - MARGIN_BOTTOM,
        }
    }

    /// Equal scale on both axes, centred on the data box.
    fn isotropic(lo: Point2, hi: Point2) -> Self {
        let mut f = Frame::new((lo.x, hi.x), (lo.y, hi.y));
        let side = f.width.min(f.height);
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let (cx, cy) = (0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y));
        f.x = (cx - 0.5 * span, cx + 0.5 * span);
        f.y = (cy - 0.5 * span, cy + 0.5 * span);
        f.left += 0.5 * (f.width - side);
        f.top += 0.5 * (f.height - side);
        f.width = side;
        f.height = side;
        f
    }

    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x.0) / (self.x.1 - self.x.0) * self.width
    }

    fn py(&self, y: f64) -> f64 {
        self.top + self.height - (y - self.y.0) / (self.y.1 - self.y.0) * self.height
    }

    fn points(&self, pts: &[Point2]) -> String {
        pts.iter()
            .map(|p| format!("{},{}", c(self.px(p.x)), c(self.py(p.y))))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    if span.abs() < 1e-12 * lo.abs().max(1.0) {
        let d = 0.05 * lo.abs().max(1.0);
        (lo - d, hi + d)
    } else {
        (lo - 0.05 * span, hi + 0.05 * span)
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Line chart with optional horizontal reference lines and point markers.
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub reference: Vec<(f64, String)>,
    pub markers: Vec<(f64, f64)>,
}

impl Chart {
    pub fn render(&self) -> String {
        let all = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .filter(|p| p.0.is_finite() && p.1.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in all.chain(self.reference.iter().map(|r| (f64::NAN, r.0))) {
            if x.is_finite() {
                x0 = x0.min(x);
                x1 = x1.max(x);
            }
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            (x0, x1) = (0.0, 1.0);
        }
        if !y0.is_finite() {
            (y0, y1) = (0.0, 1.0);
        }
        let f = Frame::new(padded(x0, x1), padded(y0, y1));
        let mut s = String::new();
        frame_box(&mut s, &f, &self.title);
        for t in ticks(f.x.0, f.x.1) {
            let x = c(f.px(t));
            let bottom = f.top + f.height;
            let _ = writeln!(
                s,
                r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#444"/>"##,
                c(bottom),
                c(bottom + 4.0)
            );
            let _ = writeln!(
                s,
                r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#,
                c(bottom + 16.0),
                number(t, 4)
            );
        }
        for t in ticks(f.y.0, f.y.1) {
            let y = c(f.py(t));
            let _ = writeln!(
                s,
                r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#444"/>"##,
                c(f.left - 4.0),
                c(f.left)
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{y}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
                c(f.left - 6.0),
                number(t, 4)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            c(f.left + 0.5 * f.width),
            c(PANEL - 10.0),
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
            c(f.top + 0.5 * f.height),
            c(f.top + 0.5 * f.height),
            escape(&self.y_label)
        );
        for (value, label) in &self.reference {
            let y = c(f.py(*value));
            let _ = writeln!(
                s,
                r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#888" stroke-dasharray="4 3"/>"##,
                c(f.left),
                c(f.left + f.width)
            );
            let _ = writeln!(
                s,
                r##"<text x="{}" y="{}" text-anchor="end" fill="#666">{}</text>"##,
                c(f.left + f.width - 4.0),
                c(f.py(*value) - 4.0),
                escape(label)
            );
        }
        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<Point2> = series.points.iter().map(|&(x, y)| Point2::new(x, y)).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                f.points(&pts)
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
                c(f.left + 8.0),
                c(f.top + 14.0 + 14.0 * i as f64),
                escape(&series.label)
            );
        }
        for &(x, y) in &self.markers {
            let _ = writeln!(
                s,
                r##"<circle cx="{}" cy="{}" r="3.5" fill="#000"/>"##,
                c(f.px(x)),
                c(f.py(y))
            );
        }
        s
    }
}

fn frame_box(s: &mut String, f: &Frame, title: &str) {
    let _ = writeln!(
        s,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
        c(f.left),
        c(f.top),
        c(f.width),
        c(f.height)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-weight="bold">{}</text>"#,
        c(PANEL / 2.0),
        escape(title)
    );
}

/// Closed outline of `D_p`, optionally translated.
pub fn ball_outline(p: BallParameter, center: Point2) -> Vec<Point2> {
    let unit: Vec<Point2> = match p {
        BallParameter::LimitOne => vec![
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(-1.0, 0.0),
            Point2::new(0.0, -1.0),
        ],
        BallParameter::LimitInfinity => {
            vec![
                Point2::new(1.0, 1.0),
                Point2::new(-1.0, 1.0),
                Point2::new(-1.0, -1.0),
                Point2::new(1.0, -1.0),
            ]
        }
        BallParameter::Finite(_) => (0..360)
            .map(|k| {
                let (sn, cs) = (k as f64 * std::f64::consts::TAU / 360.0).sin_cos();
                let d = Point2::new(cs, sn);
                (1.0 / gauge(d, p)) * d
            })
            .collect(),
    };
    unit.into_iter().map(|v| v + center).collect()
}

pub struct Shape {
    pub points: Vec<Point2>,
    pub stroke: &'static str,
    pub fill: &'static str,
    pub closed: bool,
}

/// Planar figure drawn at equal scale on both axes.
pub struct Figure {
    pub title: String,
    pub shapes: Vec<Shape>,
    pub dots: Vec<Point2>,
}

impl Figure {
    pub fn render(&self) -> String {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in self.shapes.iter().flat_map(|s| s.points.iter()).chain(self.dots.iter()) {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if !lo.x.is_finite() {
            (lo, hi) = (Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0));
        }
        let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y);
        let f = Frame::isotropic(lo - Point2::new(pad, pad), hi + Point2::new(pad, pad));
        let mut s = String::new();
        frame_box(&mut s, &Frame::new((0.0, 1.0), (0.0, 1.0)), &self.title);
        let (ox, oy) = (c(f.px(0.0)), c(f.py(0.0)));
        if (f.x.0..=f.x.1).contains(&0.0) && (f.y.0..=f.y.1).contains(&0.0) {
            let _ = writeln!(
                s,
                r##"<line x1="{}" y1="{oy}" x2="{}" y2="{oy}" stroke="#ccc"/>"##,
                c(f.left),
                c(f.left + f.width)
            );
            let _ = writeln!(
                s,
                r##"<line x1="{ox}" y1="{}" x2="{ox}" y2="{}" stroke="#ccc"/>"##,
                c(f.top),
                c(f.top + f.height)
            );
        }
        for shape in &self.shapes {
            let tag = if shape.closed { "polygon" } else { "polyline" };
            let _ = writeln!(
                s,
                r#"<{tag} points="{}" fill="{}" stroke="{}" stroke-width="1.2"/>"#,
                f.points(&shape.points),
                shape.fill,
                shape.stroke
            );
        }
        for d in &self.dots {
            let _ = writeln!(
                s,
                r##"<circle cx="{}" cy="{}" r="3" fill="#000"/>"##,
                c(f.px(d.x)),
                c(f.py(d.y))
            );
        }
        s
    }
}

/// Panels side by side in one document.
pub fn document(panels: &[String]) -> String {
    let width = PANEL * panels.len().max(1) as f64;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#,
        w = c(width),
        h = c(PANEL)
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    for (i, panel) in panels.iter().enumerate() {
        let _ = writeln!(s, r#"<g transform="translate({},0)">"#, c(PANEL * i as f64));
        s.push_str(panel);
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "</svg>");
    s
}
