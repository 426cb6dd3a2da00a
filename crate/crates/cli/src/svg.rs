//! Minimal deterministic polyline plotter for curve tables.

use std::fmt::Write;

use crate::error::CliError;
use crate::output::{PlotSpec, Table, CURVE_HEADER};

const W: f64 = 640.0;
const H: f64 = 520.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#000000", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#17becf",
];

struct Axis {
    log: bool,
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn fwd(&self, v: f64) -> f64 {
        if self.log { v.log10() } else { v }
    }

    fn accepts(&self, v: f64) -> bool {
        v.is_finite() && (!self.log || v > 0.0)
    }

    fn map(&self, v: f64) -> f64 {
        let (a, b) = (self.fwd(self.lo), self.fwd(self.hi));
        let t = (self.fwd(v) - a) / (b - a);
        self.px_lo + t * (self.px_hi - self.px_lo)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let (a, b) = (self.lo.log10().ceil() as i32, self.hi.log10().floor() as i32);
            let step = ((b - a) / 8).max(1);
            (a..=b)
                .filter(|e| (e - a) % step == 0)
                .map(|e| (10f64.powi(e), format!("1e{e}")))
                .collect()
        } else {
            (0..=5)
                .map(|i| {
                    let v = self.lo + (self.hi - self.lo) * i as f64 / 5.0;
                    (v, format!("{v:.3}"))
                })
                .collect()
        }
    }
}

fn range(spec: Option<(f64, f64)>, vals: impl Iterator<Item = f64>, log: bool) -> Result<(f64, f64), CliError> {
    if let Some(r) = spec {
        return Ok(r);
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in vals.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return Err(CliError::Usage("nothing to plot on the chosen axes".into()));
    }
    if lo == hi {
        let pad = if log { lo * 0.5 } else { lo.abs().max(1.0) * 0.05 };
        return Ok((lo - pad, hi + pad));
    }
    if log {
        Ok((10f64.powf(lo.log10().floor()), 10f64.powf(hi.log10().ceil())))
    } else {
        let pad = 0.02 * (hi - lo);
        Ok((lo - pad, hi + pad))
    }
}

/// Series, kind, and pixel positions (`None` where a point is off-axis).
type Group = (String, String, Vec<Option<(f64, f64)>>);

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Draws a `series,kind,x,y` table. Markers and medians become dots, every other kind
/// a polyline per series, broken where a point falls off a log axis.
pub fn render(table: &Table) -> Result<String, CliError> {
    let plot: &PlotSpec = match &table.plot {
        Some(p) if table.header == CURVE_HEADER => p,
        _ => return Err(CliError::Usage("svg output is only available for curve data".into())),
    };
    let xs = table.rows.iter().filter_map(|r| r[2].as_f64());
    let ys = table.rows.iter().filter_map(|r| r[3].as_f64());
    let (x0, x1) = range(plot.x_range, xs, plot.x_log)?;
    let (y0, y1) = range(plot.y_range, ys, plot.y_log)?;
    let ax = Axis { log: plot.x_log, lo: x0, hi: x1, px_lo: LEFT, px_hi: W - RIGHT };
    let ay = Axis { log: plot.y_log, lo: y0, hi: y1, px_lo: H - BOTTOM, px_hi: TOP };

    // Series in order of first appearance.
    let mut groups: Vec<Group> = Vec::new();
    for r in &table.rows {
        let (series, kind) = (r[0].as_str().unwrap_or(""), r[1].as_str().unwrap_or(""));
        let (x, y) = (r[2].as_f64().unwrap_or(f64::NAN), r[3].as_f64().unwrap_or(f64::NAN));
        let pt = (ax.accepts(x) && ay.accepts(y)).then(|| (ax.map(x), ay.map(y)));
        match groups.iter_mut().find(|g| g.0 == series && g.1 == kind) {
            Some(g) => g.2.push(pt),
            None => groups.push((series.to_string(), kind.to_string(), vec![pt])),
        }
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<defs><clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{}" height="{}"/></clipPath></defs>"#, W - LEFT - RIGHT, H - TOP - BOTTOM);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, (LEFT + W - RIGHT) / 2.0, escape(&plot.title));
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    );
    for (v, label) in ax.ticks() {
        let px = ax.map(v);
        let _ = writeln!(s, r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#ddd"/>"##, TOP, H - BOTTOM);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, H - BOTTOM + 16.0);
    }
    for (v, label) in ay.ticks() {
        let py = ay.map(v);
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ddd"/>"##, W - RIGHT);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 6.0, py + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (LEFT + W - RIGHT) / 2.0, H - 18.0, escape(&plot.x_label));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        (TOP + H - BOTTOM) / 2.0,
        escape(&plot.y_label)
    );

    let mut legend: Vec<&str> = Vec::new();
    for (series, kind, pts) in &groups {
        let idx = match legend.iter().position(|l| *l == series.as_str()) {
            Some(i) => i,
            None => {
                legend.push(series);
                legend.len() - 1
            }
        };
        let color = PALETTE[idx % PALETTE.len()];
        if kind == "marker" || kind == "median" {
            for (x, y) in pts.iter().flatten() {
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}" clip-path="url(#plot)"/>"#);
            }
            continue;
        }
        let dash = match kind.as_str() {
            "threshold" | "line" | "lil" => r#" stroke-dasharray="5,3""#,
            _ => "",
        };
        for run in pts.split(|p| p.is_none()) {
            if run.len() < 2 {
                continue;
            }
            let coords: Vec<String> = run.iter().flatten().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.2"{dash} clip-path="url(#plot)"/>"#,
                coords.join(" ")
            );
        }
    }
    for (i, name) in legend.iter().enumerate().take(30) {
        let y = TOP + 10.0 + 14.0 * i as f64;
        let x = W - RIGHT + 10.0;
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(s, r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/>"#, x + 16.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, x + 20.0, y + 4.0, escape(name));
    }
    s.push_str("</svg>\n");
    Ok(s)
}
