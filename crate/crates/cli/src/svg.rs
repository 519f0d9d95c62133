//! Minimal SVG line plots.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// One polyline per series over common abscissae, with axes and extreme-value labels.
pub fn line_plot(title: &str, xs: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let (x0, x1) = range(xs.iter().copied());
    let (y0, y1) = range(
        series
            .iter()
            .flat_map(|(_, ys)| ys.iter().copied())
            .chain([0.0]),
    );
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
    );
    if y0 < 0.0 && y1 > 0.0 {
        let z = py(0.0);
        let _ = writeln!(
            s,
            r#"<line x1="{left}" y1="{z:.2}" x2="{right}" y2="{z:.2}" stroke="gray" stroke-dasharray="4 3"/>"#
        );
    }
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, v: f64| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{v:.4}</text>"#
        );
    };
    label(&mut s, left, bottom + 16.0, "middle", x0);
    label(&mut s, right, bottom + 16.0, "middle", x1);
    label(&mut s, left - 6.0, bottom, "end", y0);
    label(&mut s, left - 6.0, top + 4.0, "end", y1);
    for (i, (name, ys)) in series.iter().enumerate() {
        let points: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(_, y)| y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.4" points="{}"><title>{}</title></polyline>"#,
            points.join(" "),
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polyline_per_series() {
        let xs = [0.0, 1.0, 2.0];
        let svg = line_plot(
            "t",
            &xs,
            &[
                ("a".into(), vec![1.0, -1.0, 2.0]),
                ("b".into(), vec![0.0; 3]),
            ],
        );
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("stroke-dasharray"));
    }

    #[test]
    fn flat_data_has_finite_coordinates() {
        let svg = line_plot("flat", &[1.0, 1.0], &[("c".into(), vec![3.0, 3.0])]);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
