//! Minimal static SVG line and scatter plots.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 450.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// One named data set; points are (x, y).
pub struct Layer<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
}

impl<'a> Layer<'a> {
    /// Uses the index as the x coordinate.
    pub fn indexed(label: &'a str, ys: &[f64]) -> Self {
        Self { label, points: ys.iter().enumerate().map(|(i, &y)| (i as f64, y)).collect() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    Line,
    Dots,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(layers: &[Layer]) -> Self {
        let pts = layers.iter().flat_map(|l| l.points.iter()).filter(|(x, y)| x.is_finite() && y.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return Self { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 };
        }
        let pad = |lo: f64, hi: f64| if hi > lo { (hi - lo) * 0.05 } else { 0.5 };
        let (px, py) = (pad(x0, x1), pad(y0, y1));
        Self { x0: x0 - px, x1: x1 + px, y0: y0 - py, y1: y1 + py }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `layers` with one mark style per layer.
pub fn plot(title: &str, x_label: &str, y_label: &str, layers: &[Layer], marks: &[Mark]) -> String {
    let f = Frame::fit(layers);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(title));
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(s, r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#, right - left, bottom - top);
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let (xv, yv) = (f.x0 + t * (f.x1 - f.x0), f.y0 + t * (f.y1 - f.y0));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, f.sx(xv), bottom + 16.0, tick(xv));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, left - 6.0, f.sy(yv) + 4.0, tick(yv));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 14.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        HEIGHT / 2.0,
        escape(y_label)
    );
    for (i, layer) in layers.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts = layer.points.iter().filter(|(x, y)| x.is_finite() && y.is_finite());
        match marks.get(i).copied().unwrap_or(Mark::Line) {
            Mark::Line => {
                let path: Vec<String> = pts.map(|&(x, y)| format!("{:.2},{:.2}", f.sx(x), f.sy(y))).collect();
                let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
            }
            Mark::Dots => {
                for &(x, y) in pts {
                    let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, f.sx(x), f.sy(y));
                }
            }
        }
        let ly = top + 16.0 + 16.0 * i as f64;
        let _ = writeln!(s, r#"<rect x="{}" y="{}" width="12" height="4" fill="{color}"/>"#, right - 150.0, ly - 6.0);
        let _ = writeln!(s, r#"<text x="{}" y="{ly}">{}</text>"#, right - 132.0, escape(layer.label));
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    if v.abs() >= 1000.0 || (v != 0.0 && v.abs() < 0.01) {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}
