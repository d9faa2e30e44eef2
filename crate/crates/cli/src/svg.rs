//! Minimal standalone SVG line plots.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(t);
        t += step;
    }
    out
}

/// Line plot with `x` on a log scale. Points with a non-finite `y` split the
/// line.
pub fn log_x_plot(points: &[(f64, f64)], title: &str, x_label: &str, y_label: &str) -> String {
    let mapped: Vec<(f64, f64)> =
        points.iter().map(|(x, y)| if *x > 0.0 { (x.log10(), *y) } else { (f64::NAN, *y) }).collect();
    plot(&mapped, true, title, x_label, y_label)
}

pub fn linear_plot(points: &[(f64, f64)], title: &str, x_label: &str, y_label: &str) -> String {
    plot(points, false, title, x_label, y_label)
}

fn plot(points: &[(f64, f64)], log_x: bool, title: &str, x_label: &str, y_label: &str) -> String {
    let finite: Vec<(f64, f64)> = points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()).copied().collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0, 1.0, 0.0, 1.0);
    if let Some(first) = finite.first() {
        (x0, x1, y0, y1) = (first.0, first.0, first.1, first.1);
        for (x, y) in &finite {
            x0 = f64::min(x0, *x);
            x1 = f64::max(x1, *x);
            y0 = f64::min(y0, *y);
            y1 = f64::max(y1, *y);
        }
    }
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let py = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN, W - MARGIN, MARGIN, H - MARGIN);
    let _ = writeln!(s, r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#);
    let x_ticks: Vec<(f64, String)> = if log_x {
        ((x0.ceil() as i64)..=(x1.floor() as i64)).map(|d| (d as f64, format!("1e{d}"))).collect()
    } else {
        nice_ticks(x0, x1, 6).into_iter().map(|v| (v, trim(v))).collect()
    };
    for (d, label) in x_ticks {
        let x = px(d);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{}" stroke="black"/>"#, bottom + 5.0);
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{label}</text>"#,
            bottom + 18.0,
        );
    }
    for v in nice_ticks(y0, y1, 6) {
        let y = py(v);
        let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/>"#, left - 5.0);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            left - 8.0,
            y + 4.0,
            trim(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        W / 2.0,
        H - 16.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );

    let mut d = String::new();
    let mut pen_down = false;
    for (x, y) in points {
        if x.is_finite() && y.is_finite() {
            let _ = write!(d, "{}{:.2} {:.2} ", if pen_down { "L" } else { "M" }, px(*x), py(*y));
            pen_down = true;
        } else {
            pen_down = false;
        }
    }
    if !d.is_empty() {
        let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#, d.trim_end());
    }
    for (x, y) in finite.iter().filter(|_| points.len() <= 64) {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, px(*x), py(*y));
    }
    s.push_str("</svg>\n");
    s
}

fn trim(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}
