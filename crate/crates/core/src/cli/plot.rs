//! Static SVG figures for influence diagnostics.

use std::fmt::Write;

const W: f64 = 720.0;
const H: f64 = 420.0;
const PAD: f64 = 50.0;

/// Moving-average window for `n` points: `max(25, n / 100)`.
pub fn trend_window(n: usize) -> usize {
    (n / 100).max(25)
}

/// Centered moving average, truncated at the ends.
pub fn moving_average(v: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let mut prefix = vec![0.0; v.len() + 1];
    for (i, x) in v.iter().enumerate() {
        prefix[i + 1] = prefix[i] + x;
    }
    (0..v.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(v.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

struct Scale {
    lo: f64,
    hi: f64,
    out_lo: f64,
    out_hi: f64,
}

impl Scale {
    fn new(lo: f64, hi: f64, out_lo: f64, out_hi: f64) -> Self {
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        Scale { lo, hi, out_lo, out_hi }
    }

    fn map(&self, v: f64) -> f64 {
        self.out_lo + (v - self.lo) / (self.hi - self.lo) * (self.out_hi - self.out_lo)
    }
}

fn extent(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Blue for negative, red for positive, white at zero; `t` in `[-1, 1]`.
fn diverging(t: f64) -> String {
    let t = t.clamp(-1.0, 1.0);
    let fade = |c: f64| (255.0 - (255.0 - c) * t.abs()).round() as u8;
    let (r, g, b) = if t < 0.0 {
        (fade(33.0), fade(102.0), fade(172.0))
    } else {
        (fade(178.0), fade(24.0), fade(43.0))
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn frame(out: &mut String, title: &str, xlabel: &str, ylabel: &str) {
    let _ = write!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">
<rect width="{W}" height="{H}" fill="white"/>
<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="#444"/>
<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>
<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>
<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{ylabel}</text>
"##,
        W - 2.0 * PAD,
        H - 2.0 * PAD,
        W / 2.0,
        W / 2.0,
        H - 12.0,
        H / 2.0,
        H / 2.0,
    );
}

fn axis_ticks(out: &mut String, xs: &Scale, ys: &Scale) {
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let xv = xs.lo + f * (xs.hi - xs.lo);
        let yv = ys.lo + f * (ys.hi - ys.lo);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            xs.map(xv),
            H - PAD + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            PAD - 6.0,
            ys.map(yv) + 4.0,
            tick(yv)
        );
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Scaled influence scores against observation index, with a moving-average trend.
pub fn influence_index_svg(tau_scaled: &[f64]) -> String {
    let n = tau_scaled.len();
    let mut out = String::new();
    let window = trend_window(n);
    frame(
        &mut out,
        &format!("Influence by index (trend: moving average, window {window})"),
        "index",
        "scaled influence",
    );
    let xs = Scale::new(0.0, n.saturating_sub(1) as f64, PAD, W - PAD);
    let (lo, hi) = extent(tau_scaled);
    let bound = lo.abs().max(hi.abs()).max(1e-12);
    let ys = Scale::new(-bound, bound, H - PAD, PAD);
    axis_ticks(&mut out, &xs, &ys);
    let _ = writeln!(
        out,
        r##"<line x1="{PAD}" x2="{}" y1="{:.1}" y2="{:.1}" stroke="#999" stroke-dasharray="4 3"/>"##,
        W - PAD,
        ys.map(0.0),
        ys.map(0.0)
    );
    for (i, &t) in tau_scaled.iter().enumerate() {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="#335"/>"##,
            xs.map(i as f64),
            ys.map(t)
        );
    }
    let trend = moving_average(tau_scaled, window);
    let points: Vec<String> = trend
        .iter()
        .enumerate()
        .map(|(i, &t)| format!("{:.1},{:.1}", xs.map(i as f64), ys.map(t)))
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#d55e00" stroke-width="2"/>"##,
        points.join(" ")
    );
    out.push_str("</svg>\n");
    out
}

/// Scatter plot colored by scaled influence, with the fitted line.
pub fn influence_scatter_svg(x: &[f64], y: &[f64], tau_scaled: &[f64], slope: f64, intercept: f64) -> String {
    let mut out = String::new();
    let (tlo, thi) = extent(tau_scaled);
    let bound = tlo.abs().max(thi.abs());
    frame(
        &mut out,
        &format!("Observations colored by scaled influence (color scale +-{bound:.3})"),
        "x",
        "y",
    );
    let (xlo, xhi) = extent(x);
    let (ylo, yhi) = extent(y);
    let xs = Scale::new(xlo, xhi, PAD, W - PAD);
    let ys = Scale::new(ylo, yhi, H - PAD, PAD);
    axis_ticks(&mut out, &xs, &ys);
    let _ = writeln!(
        out,
        r#"<clipPath id="plot"><rect x="{PAD}" y="{PAD}" width="{}" height="{}"/></clipPath>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    for i in 0..x.len() {
        let t = if bound > 0.0 { tau_scaled[i] / bound } else { 0.0 };
        let _ = writeln!(
            out,
            r##"<circle cx="{:.1}" cy="{:.1}" r="3.5" fill="{}" stroke="#333" stroke-width="0.5"/>"##,
            xs.map(x[i]),
            ys.map(y[i]),
            diverging(t)
        );
    }
    let _ = writeln!(
        out,
        r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#000" stroke-width="1.5" clip-path="url(#plot)"/>"##,
        xs.map(xs.lo),
        ys.map(intercept + slope * xs.lo),
        xs.map(xs.hi),
        ys.map(intercept + slope * xs.hi)
    );
    out.push_str("</svg>\n");
    out
}
