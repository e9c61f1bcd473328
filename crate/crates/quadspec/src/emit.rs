//! Text outputs: CSV, JSON and SVG for spectra and pseudospectrum fields.
//! Everything here is a pure function of its input, so byte-identical
//! inputs give byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use quadspec_core::pseudospectra::{PseudospectrumField, SminStatus, ZGrid};

use crate::error::AppError;
use crate::record::{tool_version, ConfigEcho, EigenRow, SpectrumRecord, SCHEMA_VERSION};

pub fn write_file(path: &Path, contents: &str) -> Result<(), AppError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| AppError::io(path, e))
}

/// 17 significant digits, enough to round-trip any `f64`.
fn g17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn spectrum_csv(rows: &[EigenRow]) -> String {
    let mut s = String::from("re,im,residual\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", g17(r.re), g17(r.im), g17(r.residual));
    }
    s
}

pub fn record_json(record: &SpectrumRecord) -> String {
    let mut s = serde_json::to_string_pretty(record).expect("records are always serializable");
    s.push('\n');
    s
}

pub fn read_record(path: &Path) -> Result<SpectrumRecord, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| AppError::io(path, e))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 50.0;

/// Data range widened by 5% on each side; a degenerate range gets a
/// width proportional to its magnitude.
fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
    (lo - 0.05 * span, hi + 0.05 * span)
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn axes(&self, s: &mut String, title: &str, xlabel: &str, ylabel: &str) {
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let _ = writeln!(
            s,
            r##"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="#000"/>"##,
            x1 - x0,
            y0 - y1
        );
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let xv = self.x.0 + t * (self.x.1 - self.x.0);
            let yv = self.y.0 + t * (self.y.1 - self.y.0);
            let xp = self.px(xv);
            let yp = self.py(yv);
            let _ = writeln!(
                s,
                r##"<line x1="{xp:.2}" y1="{y0}" x2="{xp:.2}" y2="{:.2}" stroke="#000"/><text x="{xp:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                y0 + 5.0,
                y0 + 18.0,
                tick(xv)
            );
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="{yp:.2}" x2="{x0}" y2="{yp:.2}" stroke="#000"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                x0 - 5.0,
                x0 - 8.0,
                yp + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 10.0,
            escape(xlabel)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(ylabel)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="22" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            escape(title)
        );
    }
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        let t = format!("{v:.3}");
        let t = t.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".into() } else { t.into() }
    }
}

fn svg_open(s: &mut String) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
}

/// Scatter of eigenvalues in the complex plane, one `<circle>` per value.
pub fn spectrum_svg(title: &str, rows: &[EigenRow]) -> String {
    let bounds = |f: fn(&EigenRow) -> f64| {
        rows.iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (xr, yr) = if rows.is_empty() {
        ((-1.0, 1.0), (-1.0, 1.0))
    } else {
        let (a, b) = bounds(|r| r.re);
        let (c, d) = bounds(|r| r.im);
        (padded(a, b), padded(c, d))
    };
    let frame = Frame { x: xr, y: yr };
    let mut s = String::new();
    svg_open(&mut s);
    frame.axes(&mut s, title, "Re λ", "Im λ");
    for r in rows {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.3}" cy="{:.3}" r="2.5" fill="#1f4e9c"/>"##,
            frame.px(r.re),
            frame.py(r.im)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn status_name(s: SminStatus) -> &'static str {
    match s {
        SminStatus::Converged => "converged",
        SminStatus::Approximate => "approximate",
        SminStatus::Singular => "singular",
    }
}

pub fn field_csv(field: &PseudospectrumField) -> String {
    let mut s = String::from("z_re,z_im,smin\n");
    for (flat, v) in field.values.iter().enumerate() {
        let z = field.grid.point(flat);
        let _ = writeln!(s, "{},{},{}", g17(z.re), g17(z.im), g17(*v));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEcho {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl From<&ZGrid> for GridEcho {
    fn from(g: &ZGrid) -> Self {
        GridEcho {
            re_min: g.re_min,
            re_max: g.re_max,
            im_min: g.im_min,
            im_max: g.im_max,
            nx: g.nx,
            ny: g.ny,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub schema_version: u32,
    pub tool: String,
    pub tag: String,
    pub config: ConfigEcho,
    pub grid: GridEcho,
    pub seed: u64,
    /// `smin[j * nx + i]` at `re_min + i·Δre`, `im_min + j·Δim`.
    pub smin: Vec<f64>,
    pub iterations: Vec<usize>,
    pub status: Vec<String>,
}

pub fn field_record(tag: String, config: ConfigEcho, field: &PseudospectrumField) -> FieldRecord {
    FieldRecord {
        schema_version: SCHEMA_VERSION,
        tool: tool_version(),
        tag,
        config,
        grid: (&field.grid).into(),
        seed: field.seed,
        smin: field.values.clone(),
        iterations: field.iterations.clone(),
        status: field.status.iter().map(|s| status_name(*s).to_string()).collect(),
    }
}

pub fn field_json(record: &FieldRecord) -> String {
    let mut s = serde_json::to_string_pretty(record).expect("records are always serializable");
    s.push('\n');
    s
}

/// Grayscale map of `log10 s_min`, dark where `s_min` is small.
/// Singular points are drawn black.
pub fn field_svg(title: &str, field: &PseudospectrumField) -> String {
    let g = &field.grid;
    let logs: Vec<Option<f64>> = field
        .values
        .iter()
        .map(|&v| (v > 0.0 && v.is_finite()).then(|| v.log10()))
        .collect();
    let (lo, hi) = logs
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let dx = (g.re_max - g.re_min) / (g.nx - 1) as f64;
    let dy = (g.im_max - g.im_min) / (g.ny - 1) as f64;
    let frame = Frame {
        x: (g.re_min - dx / 2.0, g.re_max + dx / 2.0),
        y: (g.im_min - dy / 2.0, g.im_max + dy / 2.0),
    };
    let mut s = String::new();
    svg_open(&mut s);
    let cw = frame.px(g.re_min + dx) - frame.px(g.re_min);
    let ch = frame.py(g.im_min) - frame.py(g.im_min + dy);
    for j in 0..g.ny {
        for i in 0..g.nx {
            let level = match logs[j * g.nx + i] {
                Some(v) if hi > lo => ((v - lo) / (hi - lo) * 255.0).round() as u8,
                Some(_) => 128,
                None => 0,
            };
            let z = g.node(i, j);
            let _ = writeln!(
                s,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="rgb({level},{level},{level})"/>"#,
                frame.px(z.re) - cw / 2.0,
                frame.py(z.im) - ch / 2.0,
                cw,
                ch
            );
        }
    }
    let label = if lo.is_finite() {
        format!("{title}  (log10 smin from {} to {})", tick(lo), tick(hi))
    } else {
        title.to_string()
    };
    frame.axes(&mut s, &label, "Re z", "Im z");
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_every_digit() {
        let rows = [EigenRow { re: 0.1 + 0.2, im: -1.0 / 3.0, residual: 5e-324 }];
        let csv = spectrum_csv(&rows);
        let line = csv.lines().nth(1).unwrap();
        let back: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        assert_eq!(back, [rows[0].re, rows[0].im, rows[0].residual]);
    }

    #[test]
    fn padding_handles_degenerate_ranges() {
        assert_eq!(padded(0.0, 10.0), (-0.5, 10.5));
        let (a, b) = padded(0.0, 0.0);
        assert!(a < 0.0 && b > 0.0);
        let (a, b) = padded(-20.0, -20.0);
        assert!(a < -20.0 && b > -20.0);
    }

    #[test]
    fn scatter_bounds_are_data_bounds_padded_five_percent() {
        let rows = [
            EigenRow { re: 1.0, im: 1.0, residual: 0.0 },
            EigenRow { re: 1.0, im: -1.0, residual: 0.0 },
        ];
        let svg = spectrum_svg("t", &rows);
        // Im spans [-1.1, 1.1], so +1 sits 0.1/2.2 of the height below the top.
        let top = TOP + (HEIGHT - TOP - BOTTOM) / 22.0;
        let bottom = HEIGHT - BOTTOM - (HEIGHT - TOP - BOTTOM) / 22.0;
        assert!(svg.contains(&format!(r#"<circle cx="350.000" cy="{top:.3}""#)), "{svg}");
        assert!(svg.contains(&format!(r#"<circle cx="350.000" cy="{bottom:.3}""#)));
    }

    #[test]
    fn ticks_are_short() {
        assert_eq!(tick(0.0), "0");
        assert_eq!(tick(-0.0001), "-1.00e-4");
        assert_eq!(tick(2.5), "2.5");
        assert_eq!(tick(-0.0004), "-4.00e-4");
    }
}
