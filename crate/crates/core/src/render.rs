//! SVG diagrams and one-line text art for disk systems.
//!
//! Sectors start at 12 o'clock and run clockwise. Side-by-side layout draws
//! one disk per qubit, all sharing the same boundaries; stacked layout draws
//! concentric equal-width rings with qubit 0 outermost.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::disk::{Color, DiskSystem, Sign};
use crate::error::{Error, Result};

pub const BLUE: &str = "#1f77b4";
pub const ORANGE: &str = "#ff7f0e";

/// Below this sweep a sector is treated as the full turn.
const FULL_TURN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    SideBySide,
    Stacked,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSpec {
    pub layout: Layout,
    /// Window position as a fraction of a turn.
    pub window_angle: Option<f64>,
    pub show_signs: bool,
    /// Pixel size of one disk.
    pub size: u32,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { layout: Layout::SideBySide, window_angle: None, show_signs: true, size: 240 }
    }
}

fn fill(color: Color) -> &'static str {
    match color {
        Color::Blue => BLUE,
        Color::Orange => ORANGE,
    }
}

/// `(start, sweep)` of every region in degrees, clockwise from 12 o'clock.
pub fn sector_angles(disk: &DiskSystem) -> Vec<(f64, f64)> {
    let total = disk.total_fraction();
    disk.boundaries()
        .into_iter()
        .zip(disk.regions())
        .map(|(start, r)| (start / total * 360.0, r.fraction / total * 360.0))
        .collect()
}

fn point(cx: f64, cy: f64, r: f64, turn: f64) -> (f64, f64) {
    let a = turn * TAU;
    (cx + r * a.sin(), cy - r * a.cos())
}

/// Path data for the sector between `start` and `end` (fractions of a turn)
/// of the ring `r_in..r_out`. A zero inner radius gives a pie wedge.
fn sector_path(cx: f64, cy: f64, r_out: f64, r_in: f64, start: f64, end: f64) -> String {
    let mut d = String::new();
    if end - start >= 1.0 - FULL_TURN_SLACK {
        // Two half arcs per circle; evenodd leaves the hole empty.
        let _ = write!(
            d,
            "M {cx:.3} {:.3} A {r_out:.3} {r_out:.3} 0 1 1 {cx:.3} {:.3} A {r_out:.3} {r_out:.3} 0 1 1 {cx:.3} {:.3} Z",
            cy - r_out,
            cy + r_out,
            cy - r_out
        );
        if r_in > 0.0 {
            let _ = write!(
                d,
                " M {cx:.3} {:.3} A {r_in:.3} {r_in:.3} 0 1 0 {cx:.3} {:.3} A {r_in:.3} {r_in:.3} 0 1 0 {cx:.3} {:.3} Z",
                cy - r_in,
                cy + r_in,
                cy - r_in
            );
        }
        return d;
    }
    let large = u8::from(end - start > 0.5);
    let (x0, y0) = point(cx, cy, r_out, start);
    let (x1, y1) = point(cx, cy, r_out, end);
    let _ = write!(d, "M {x0:.3} {y0:.3} A {r_out:.3} {r_out:.3} 0 {large} 1 {x1:.3} {y1:.3}");
    if r_in > 0.0 {
        let (x2, y2) = point(cx, cy, r_in, end);
        let (x3, y3) = point(cx, cy, r_in, start);
        let _ = write!(d, " L {x2:.3} {y2:.3} A {r_in:.3} {r_in:.3} 0 {large} 0 {x3:.3} {y3:.3} Z");
    } else {
        let _ = write!(d, " L {cx:.3} {cy:.3} Z");
    }
    d
}

struct Canvas {
    body: String,
}

impl Canvas {
    fn sector(&mut self, color: Color, d: &str, region: usize, qubit: usize) {
        let _ = writeln!(
            self.body,
            r##"<path class="region" data-region="{region}" data-qubit="{qubit}" d="{d}" fill="{}" fill-rule="evenodd" stroke="#ffffff" stroke-width="1"/>"##,
            fill(color)
        );
    }

    fn full_disk(&mut self, color: Color, cx: f64, cy: f64, r: f64, qubit: usize) {
        let _ = writeln!(
            self.body,
            r##"<circle class="region" data-region="0" data-qubit="{qubit}" cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" fill="{}" stroke="#ffffff" stroke-width="1"/>"##,
            fill(color)
        );
    }

    fn hatch(&mut self, d: &str) {
        let _ = writeln!(
            self.body,
            r##"<path class="negative" d="{d}" fill="url(#hatch)" fill-rule="evenodd" stroke="none"/>"##
        );
    }

    fn minus(&mut self, x: f64, y: f64, font: f64) {
        let _ = writeln!(
            self.body,
            r##"<text class="sign" x="{x:.3}" y="{y:.3}" font-size="{font:.3}" font-family="sans-serif" text-anchor="middle" dominant-baseline="central" fill="#000000">−</text>"##
        );
    }

    fn window(&mut self, x: f64, y: f64, r: f64) {
        let _ = writeln!(
            self.body,
            r##"<circle class="window" cx="{x:.3}" cy="{y:.3}" r="{r:.3}" fill="none" stroke="#000000" stroke-width="2"/>"##
        );
    }
}

/// Renders `disk` as an SVG 1.1 document. Output is a pure function of the
/// inputs.
pub fn render_svg(disk: &DiskSystem, spec: &RenderSpec) -> Result<String> {
    if spec.size == 0 {
        return Err(Error::InvalidParameter("render size must be positive".into()));
    }
    if spec.layout == Layout::Stacked && disk.n_qubits() < 2 {
        return Err(Error::StackedNeedsTwoQubits);
    }
    if let Some(w) = spec.window_angle {
        if !(0.0..1.0).contains(&w) {
            return Err(Error::InvalidDraw(w));
        }
    }
    let size = spec.size as f64;
    let margin = size * 0.06;
    let radius = size / 2.0 - margin;
    let total = disk.total_fraction();
    let starts: Vec<f64> = disk.boundaries().iter().map(|b| b / total).collect();
    let spans: Vec<(f64, f64)> =
        starts.iter().zip(disk.regions()).map(|(&s, r)| (s, s + r.fraction / total)).collect();
    let font = size * 0.08;
    let window_r = size * 0.025;
    let mut canvas = Canvas { body: String::new() };

    let (width, height) = match spec.layout {
        Layout::SideBySide => {
            for q in 0..disk.n_qubits() {
                let cx = q as f64 * size + size / 2.0;
                let cy = size / 2.0;
                let _ = writeln!(canvas.body, r##"<g class="disk" data-qubit="{q}">"##);
                for (i, (r, &(s, e))) in disk.regions().iter().zip(&spans).enumerate() {
                    let full = e - s >= 1.0 - FULL_TURN_SLACK;
                    let d = sector_path(cx, cy, radius, 0.0, s, e);
                    if full {
                        canvas.full_disk(r.colors[q], cx, cy, radius, q);
                    } else {
                        canvas.sector(r.colors[q], &d, i, q);
                    }
                    if spec.show_signs && r.sign == Sign::Minus {
                        canvas.hatch(&d);
                        let (x, y) = point(cx, cy, radius * 0.6, (s + e) / 2.0);
                        canvas.minus(x, y, font);
                    }
                }
                if let Some(w) = spec.window_angle {
                    let (x, y) = point(cx, cy, radius, w);
                    canvas.window(x, y, window_r);
                }
                canvas.body.push_str("</g>\n");
            }
            (size * disk.n_qubits() as f64, size)
        }
        Layout::Stacked => {
            let (cx, cy) = (size / 2.0, size / 2.0);
            let hole = radius * 0.2;
            let width = (radius - hole) / disk.n_qubits() as f64;
            let ring = |q: usize| (radius - q as f64 * width, radius - (q + 1) as f64 * width);
            let _ = writeln!(canvas.body, r##"<g class="stack">"##);
            for q in 0..disk.n_qubits() {
                let (r_out, r_in) = ring(q);
                for (i, (r, &(s, e))) in disk.regions().iter().zip(&spans).enumerate() {
                    canvas.sector(r.colors[q], &sector_path(cx, cy, r_out, r_in, s, e), i, q);
                }
            }
            if spec.show_signs {
                for (r, &(s, e)) in disk.regions().iter().zip(&spans) {
                    if r.sign == Sign::Minus {
                        canvas.hatch(&sector_path(cx, cy, radius, hole, s, e));
                        let (r_out, r_in) = ring(0);
                        let (x, y) = point(cx, cy, (r_out + r_in) / 2.0, (s + e) / 2.0);
                        canvas.minus(x, y, font);
                    }
                }
            }
            if let Some(w) = spec.window_angle {
                for q in 0..disk.n_qubits() {
                    let (r_out, r_in) = ring(q);
                    let (x, y) = point(cx, cy, (r_out + r_in) / 2.0, w);
                    canvas.window(x, y, window_r);
                }
            }
            canvas.body.push_str("</g>\n");
            (size, size)
        }
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"##
    );
    out.push_str(
        "<defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\" patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#000000\" stroke-width=\"1.5\"/></pattern></defs>\n",
    );
    out.push_str(&canvas.body);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Bracket form, one `[colors fraction sign]` group per region.
pub fn render_text(disk: &DiskSystem) -> String {
    disk.regions()
        .iter()
        .map(|r| format!("[{} {:.3} {}]", r.color_string(), r.fraction, r.sign.symbol()))
        .collect()
}
