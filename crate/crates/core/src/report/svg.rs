//! Minimal static line charts written as SVG text.

use std::fmt::Write;

pub struct Line<'a> {
    pub label: &'a str,
    pub multiplier: Option<f64>,
    pub values: &'a [f64],
}

pub struct Panel<'a> {
    pub title: &'a str,
    pub lines: Vec<Line<'a>>,
}

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 280.0;
const MARGIN_L: f64 = 62.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 36.0;

/// Blue for low multipliers through red for high ones; grey for
/// scenarios without a multiplier.
fn color(multiplier: Option<f64>) -> String {
    match multiplier {
        Some(m) => {
            let t = (m / 2.0).clamp(0.0, 1.0);
            let r = (40.0 + 200.0 * t).round() as u8;
            let b = (220.0 - 180.0 * t).round() as u8;
            format!("#{r:02x}40{b:02x}")
        }
        None => "#555555".to_string(),
    }
}

fn nice_step(range: f64) -> f64 {
    let raw = range / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    step * mag
}

fn panel(out: &mut String, p: &Panel<'_>, ox: f64, oy: f64, start_year: i32) {
    let n = p.lines.iter().map(|l| l.values.len()).max().unwrap_or(0);
    let end_year = start_year + n.saturating_sub(1) as i32;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in p.lines.iter().flat_map(|l| l.values.iter()) {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    if !lo.is_finite() {
        lo = 0.0;
        hi = 1.0;
    }
    if hi - lo < 1e-9 {
        hi = lo + 1.0;
    }
    let step = nice_step(hi - lo);
    let lo = (lo / step).floor() * step;
    let hi = (hi / step).ceil() * step;

    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let x_of = |i: usize| ox + MARGIN_L + plot_w * i as f64 / (n.max(2) - 1) as f64;
    let y_of = |v: f64| oy + MARGIN_T + plot_h * (1.0 - (v - lo) / (hi - lo));

    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">{}</text>"#,
        ox + MARGIN_L + plot_w / 2.0,
        oy + 18.0,
        escape(p.title)
    );
    let _ = writeln!(
        out,
        r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#999999"/>"##,
        ox + MARGIN_L,
        oy + MARGIN_T,
        plot_w,
        plot_h
    );
    let mut tick = lo;
    while tick <= hi + step * 1e-6 {
        let y = y_of(tick);
        let _ = writeln!(
            out,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#e0e0e0"/><text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{}</text>"##,
            ox + MARGIN_L,
            ox + MARGIN_L + plot_w,
            ox + MARGIN_L - 4.0,
            y + 3.0,
            trim_tick(tick)
        );
        tick += step;
    }
    let mut year = start_year - start_year.rem_euclid(10) + 10;
    if start_year % 10 == 0 {
        year = start_year;
    }
    while year <= end_year {
        let x = x_of((year - start_year) as usize);
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{:.1}" font-size="10" text-anchor="middle">{year}</text>"#,
            oy + MARGIN_T + plot_h + 14.0
        );
        year += 20;
    }
    for line in &p.lines {
        if line.values.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (i, v) in line.values.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, x_of(i), y_of(*v));
        }
        let _ = writeln!(
            out,
            r#"<path d="{d}" fill="none" stroke="{}" stroke-width="1.2"><title>{}</title></path>"#,
            color(line.multiplier),
            escape(line.label)
        );
    }
}

fn trim_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Grid of panels sharing a legend of scenario labels. Values are plotted as
/// given (the caller chooses units).
pub fn chart(title: &str, y_label: &str, panels: &[Panel<'_>], columns: usize, start_year: i32) -> String {
    let columns = columns.max(1);
    let rows = panels.len().div_ceil(columns).max(1);
    let legend: Vec<(&str, Option<f64>)> = panels
        .first()
        .map(|p| p.lines.iter().map(|l| (l.label, l.multiplier)).collect())
        .unwrap_or_default();
    let legend_h = 16.0 * legend.len().div_ceil(6) as f64 + 8.0;
    let width = PANEL_W * columns as f64;
    let height = 40.0 + PANEL_H * rows as f64 + legend_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="22" font-size="16" text-anchor="middle">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<text x="12" y="{:.1}" font-size="11" transform="rotate(-90 12 {:.1})" text-anchor="middle">{}</text>"#,
        40.0 + PANEL_H * rows as f64 / 2.0,
        40.0 + PANEL_H * rows as f64 / 2.0,
        escape(y_label)
    );
    for (i, p) in panels.iter().enumerate() {
        let ox = PANEL_W * (i % columns) as f64;
        let oy = 40.0 + PANEL_H * (i / columns) as f64;
        panel(&mut out, p, ox, oy, start_year);
    }
    let base_y = 40.0 + PANEL_H * rows as f64 + 12.0;
    for (i, (label, m)) in legend.iter().enumerate() {
        let x = 20.0 + (i % 6) as f64 * (width - 40.0) / 6.0;
        let y = base_y + 16.0 * (i / 6) as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{}" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-size="10">{}</text>"#,
            x + 18.0,
            color(*m),
            x + 22.0,
            y + 3.0,
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}
