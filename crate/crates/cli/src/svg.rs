//! Minimal static line plots.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 78.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 56.0;
const PALETTE: [&str; 8] = ["#000000", "#1f4fd1", "#1e9e3a", "#8a2be2", "#d62728", "#ff7f0e", "#17becf", "#8c564b"];

#[derive(Clone, Debug)]
pub struct Curve {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub color: Option<String>,
}

impl Curve {
    pub fn new(label: &str, x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { label: label.into(), x, y, color: None }
    }

    pub fn color(mut self, c: &str) -> Self {
        self.color = Some(c.into());
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub curves: Vec<Curve>,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        if !log {
            let pad = 0.04 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
        Self { lo, hi, log }
    }

    fn frac(&self, v: f64) -> Option<f64> {
        let v = if self.log {
            if v <= 0.0 {
                return None;
            }
            v.log10()
        } else {
            v
        };
        v.is_finite().then(|| (v - self.lo) / (self.hi - self.lo))
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
            return (a..=b).map(|e| 10f64.powi(e)).collect();
        }
        let raw = (self.hi - self.lo) / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
        let start = (self.lo / step).ceil() as i64;
        let stop = (self.hi / step).floor() as i64;
        (start..=stop).map(|k| k as f64 * step).collect()
    }
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-3) {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    pub fn render(&self) -> String {
        let xa = Axis::fit(self.curves.iter().flat_map(|c| c.x.iter().copied()), self.log_x);
        let ya = Axis::fit(self.curves.iter().flat_map(|c| c.y.iter().copied()), self.log_y);
        let pw = WIDTH - MARGIN_L - MARGIN_R;
        let ph = HEIGHT - MARGIN_T - MARGIN_B;
        let px = |f: f64| MARGIN_L + f * pw;
        let py = |f: f64| MARGIN_T + (1.0 - f) * ph;

        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        writeln!(
            s,
            r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        )
        .unwrap();
        for t in xa.ticks() {
            if let Some(f) = xa.frac(t).filter(|f| (-1e-9..=1.0 + 1e-9).contains(f)) {
                let x = px(f);
                writeln!(s, r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{MARGIN_T}" stroke="#dddddd"/>"##, MARGIN_T + ph).unwrap();
                writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, MARGIN_T + ph + 16.0, label(t)).unwrap();
            }
        }
        for t in ya.ticks() {
            if let Some(f) = ya.frac(t).filter(|f| (-1e-9..=1.0 + 1e-9).contains(f)) {
                let y = py(f);
                writeln!(s, r##"<line x1="{MARGIN_L}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##, MARGIN_L + pw).unwrap();
                writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, MARGIN_L - 6.0, y + 4.0, label(t)).unwrap();
            }
        }
        writeln!(s, r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#, MARGIN_L + pw / 2.0, escape(&self.title)).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, MARGIN_L + pw / 2.0, HEIGHT - 14.0, escape(&self.x_label)).unwrap();
        writeln!(
            s,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            MARGIN_T + ph / 2.0,
            MARGIN_T + ph / 2.0,
            escape(&self.y_label)
        )
        .unwrap();

        for (k, c) in self.curves.iter().enumerate() {
            let color = c.color.clone().unwrap_or_else(|| PALETTE[k % PALETTE.len()].to_string());
            let mut segment = Vec::new();
            let flush = |seg: &mut Vec<String>, s: &mut String| {
                if seg.len() > 1 {
                    writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#, seg.join(" ")).unwrap();
                }
                seg.clear();
            };
            for (&x, &y) in c.x.iter().zip(&c.y) {
                match (xa.frac(x), ya.frac(y)) {
                    (Some(fx), Some(fy)) => segment.push(format!("{:.2},{:.2}", px(fx), py(fy.clamp(-0.05, 1.05)))),
                    _ => flush(&mut segment, &mut s),
                }
            }
            flush(&mut segment, &mut s);
            let ly = MARGIN_T + 14.0 + 18.0 * k as f64;
            let lx = MARGIN_L + pw + 12.0;
            let color = c.color.clone().unwrap_or_else(|| PALETTE[k % PALETTE.len()].to_string());
            writeln!(s, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, lx + 22.0).unwrap();
            writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 28.0, ly + 4.0, escape(&c.label)).unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}
