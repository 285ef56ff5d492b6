//! Minimal static line plots.

use std::fmt::Write as _;

pub struct Series<'a> {
    pub label: &'a str,
    pub y: Vec<f64>,
    pub color: &'a str,
    pub dashed: bool,
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 48.0;

/// Renders the series against a shared `x` axis. A horizontal guide marks
/// `y = 1`, the CHSH bound.
pub fn line_plot(title: &str, x_label: &str, x: &[f64], series: &[Series<'_>]) -> String {
    let finite = |v: &&f64| v.is_finite();
    let (x0, x1) = bounds(x.iter().filter(finite).copied());
    let (mut y0, mut y1) = bounds(series.iter().flat_map(|s| s.y.iter().filter(finite).copied()));
    y0 = y0.min(0.0);
    y1 = y1.max(1.0);
    let sx = |v: f64| PAD + (v - x0) / (x1 - x0).max(f64::MIN_POSITIVE) * (W - 2.0 * PAD);
    let sy = |v: f64| H - PAD - (v - y0) / (y1 - y0).max(f64::MIN_POSITIVE) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{PAD},{PAD} V{} H{}" stroke="black" fill="none"/>"#,
        H - PAD,
        W - PAD
    );
    let _ = writeln!(
        s,
        r##"<line x1="{PAD}" x2="{}" y1="{y}" y2="{y}" stroke="#999" stroke-dasharray="2,3"/>"##,
        W - PAD,
        y = sy(1.0)
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#, W / 2.0, H - 12.0, escape(x_label));
    for (v, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{v:.3}</text>"#, sx(v), H - PAD + 14.0);
    }
    for v in [y0, y1] {
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">{v:.3}</text>"#, PAD - 4.0, sy(v) + 3.0);
    }
    for (i, ser) in series.iter().enumerate() {
        let mut d = String::new();
        let mut pen_up = true;
        for (&xv, &yv) in x.iter().zip(&ser.y) {
            if !(xv.is_finite() && yv.is_finite()) {
                pen_up = true;
                continue;
            }
            let _ = write!(d, "{}{:.2},{:.2} ", if pen_up { "M" } else { "L" }, sx(xv), sy(yv));
            pen_up = false;
        }
        let dash = if ser.dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(s, r#"<path d="{}" stroke="{}" fill="none" stroke-width="1.5"{dash}/>"#, d.trim_end(), ser.color);
        let ly = PAD + 16.0 * i as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" font-family="sans-serif" font-size="12" fill="{}" text-anchor="end">{}</text>"#, W - PAD, ser.color, escape(ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
