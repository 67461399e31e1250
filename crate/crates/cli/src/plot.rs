//! Minimal SVG line chart: mean AoI against λ, one series per (m, method).
//!
//! Layout: 720×450 canvas, plot area inset by fixed margins, five ticks per
//! axis, legend in the top-right corner of the plot area. Analytic series
//! are polylines; simulated series are dots with CI whiskers.

use std::collections::BTreeMap;
use std::fmt::Write;

use aoi_core::EstimateMethod;

use crate::sweep::SweepRow;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / n as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|k| k * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() * step;
    (0..).map(|k| first + k as f64 * step).take_while(|v| *v <= hi + 1e-9 * span).collect()
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn render_svg(rows: &[SweepRow], title: &str) -> String {
    let mut series: BTreeMap<(usize, EstimateMethod), Vec<&SweepRow>> = BTreeMap::new();
    for r in rows {
        series.entry((r.m, r.method)).or_default().push(r);
    }
    let finite = rows.iter().filter(|r| r.mean_aoi.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for r in finite {
        x0 = x0.min(r.lambda);
        x1 = x1.max(r.lambda);
        y0 = y0.min(r.mean_aoi - r.ci_halfwidth);
        y1 = y1.max(r.mean_aoi + r.ci_halfwidth);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    let pad = 0.05 * (y1 - y0).max(1e-6);
    y0 = (y0 - pad).max(0.0);
    y1 += pad;

    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(svg, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for t in nice_ticks(x0, x1, 5) {
        let x = sx(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 19.0,
            fmt_tick(t)
        );
    }
    for t in nice_ticks(y0, y1, 5) {
        let y = sy(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            fmt_tick(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">arrival rate λ</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">mean AoI</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (idx, ((m, method), pts)) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let pts: Vec<_> = pts.iter().filter(|r| r.mean_aoi.is_finite()).collect();
        match method {
            EstimateMethod::Analytic => {
                let coords: Vec<String> =
                    pts.iter().map(|r| format!("{:.2},{:.2}", sx(r.lambda), sy(r.mean_aoi))).collect();
                let _ = writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
                    coords.join(" ")
                );
            }
            EstimateMethod::Simulated => {
                for r in &pts {
                    let (x, y) = (sx(r.lambda), sy(r.mean_aoi));
                    if r.ci_halfwidth.is_finite() && r.ci_halfwidth > 0.0 {
                        let _ = writeln!(
                            svg,
                            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{color}"/>"#,
                            sy(r.mean_aoi - r.ci_halfwidth),
                            sy(r.mean_aoi + r.ci_halfwidth)
                        );
                    }
                    let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#);
                }
            }
        }
        let ly = TOP + 16.0 + 18.0 * idx as f64;
        let lx = LEFT + pw - 150.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">m = {m} ({method})</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
