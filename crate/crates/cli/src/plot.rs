//! Static SVG charts of the median summary.

use std::fmt::Write;

use hermeig::Method;

use crate::plan::Selection;
use crate::record::SummaryRow;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;
const METHOD_COLORS: [&str; 2] = ["#4477aa", "#ee6677"];
const STEP_COLORS: [&str; 5] = ["#4477aa", "#66ccee", "#228833", "#ccbb44", "#ee6677"];

fn method_color(m: Method) -> &'static str {
    METHOD_COLORS[Method::ALL.iter().position(|x| *x == m).unwrap_or(0)]
}

fn header(title: &str, y_label: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{title}</text>"#, WIDTH / 2.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" transform="rotate(-90 16 {})" text-anchor="middle">{y_label}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{}" x2="{}" y2="{}" stroke="black"/><line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{}" stroke="black"/>"#,
        HEIGHT - MARGIN,
        WIDTH - 20.0,
        HEIGHT - MARGIN,
        HEIGHT - MARGIN
    );
    s
}

fn y_ticks(s: &mut String, max: f64) {
    for k in 0..=4 {
        let v = max * k as f64 / 4.0;
        let y = HEIGHT - MARGIN - (HEIGHT - 2.0 * MARGIN) * k as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{v:.3}</text>"#, MARGIN - 4.0, y + 4.0);
    }
}

fn legend(s: &mut String, entries: &[(&str, &str)]) {
    for (i, (label, color)) in entries.iter().enumerate() {
        let y = MARGIN + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/><text x="{}" y="{}">{label}</text>"#,
            WIDTH - 150.0,
            y - 9.0,
            WIDTH - 135.0,
            y
        );
    }
}

fn sizes(rows: &[&SummaryRow]) -> Vec<usize> {
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns
}

/// Grouped bars: median total time per size, one bar per method.
fn time_chart(sel: Selection, rows: &[&SummaryRow]) -> String {
    let ns = sizes(rows);
    let max = rows.iter().map(|r| r.times.total).fold(f64::MIN_POSITIVE, f64::max);
    let mut s = header(&format!("Time to solution, selection {sel}"), "median seconds");
    y_ticks(&mut s, max);
    let slot = (WIDTH - MARGIN - 20.0) / ns.len() as f64;
    let bar = slot / (Method::ALL.len() as f64 + 1.0);
    for (g, n) in ns.iter().enumerate() {
        let x0 = MARGIN + slot * g as f64 + bar / 2.0;
        for (k, m) in Method::ALL.iter().enumerate() {
            if let Some(r) = rows.iter().find(|r| r.n == *n && r.method == *m) {
                let h = (HEIGHT - 2.0 * MARGIN) * r.times.total / max;
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="{}"><title>{} n={n}: {:.4} s</title></rect>"#,
                    x0 + bar * k as f64,
                    HEIGHT - MARGIN - h,
                    bar * 0.9,
                    h,
                    method_color(*m),
                    m,
                    r.times.total
                );
            }
        }
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">n={n}</text>"#, x0 + bar, HEIGHT - MARGIN + 16.0);
    }
    let entries: Vec<(&str, &str)> = Method::ALL.iter().map(|m| (m.as_str(), method_color(*m))).collect();
    legend(&mut s, &entries);
    s.push_str("</svg>\n");
    s
}

/// Stacked bars of the per-step breakdown for every (size, method).
fn steps_chart(sel: Selection, rows: &[&SummaryRow]) -> String {
    let mut ordered: Vec<&SummaryRow> = rows.to_vec();
    ordered.sort_by_key(|r| (r.n, Method::ALL.iter().position(|m| *m == r.method)));
    let max = ordered
        .iter()
        .map(|r| r.times.steps().iter().map(|(_, t)| t).sum::<f64>())
        .fold(f64::MIN_POSITIVE, f64::max);
    let mut s = header(&format!("Step breakdown, selection {sel}"), "median seconds");
    y_ticks(&mut s, max);
    let slot = (WIDTH - MARGIN - 170.0) / ordered.len().max(1) as f64;
    for (i, r) in ordered.iter().enumerate() {
        let x = MARGIN + slot * i as f64 + slot * 0.1;
        let mut y = HEIGHT - MARGIN;
        for (k, (name, t)) in r.times.steps().iter().enumerate() {
            let h = (HEIGHT - 2.0 * MARGIN) * t / max;
            y -= h;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{:.1}" height="{h:.1}" fill="{}"><title>{name}: {t:.4} s</title></rect>"#,
                slot * 0.8,
                STEP_COLORS[k]
            );
        }
        let short = match r.method {
            Method::OneStage => "1s",
            Method::TwoStage => "2s",
        };
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle" font-size="10">{}/{short}</text>"#,
            x + slot * 0.4,
            HEIGHT - MARGIN + 14.0,
            r.n
        );
    }
    let entries: Vec<(&str, &str)> =
        ["cholesky", "transform", "tridiag", "dc", "backtransform"].into_iter().zip(STEP_COLORS).collect();
    legend(&mut s, &entries);
    s.push_str("</svg>\n");
    s
}

/// `(file name, svg)` pairs, two per selection present in the summary.
pub fn plots(summary: &[SummaryRow]) -> Vec<(String, String)> {
    let mut sels: Vec<Selection> = Vec::new();
    for r in summary {
        if !sels.contains(&r.sel) {
            sels.push(r.sel);
        }
    }
    let mut out = Vec::new();
    for sel in sels {
        let rows: Vec<&SummaryRow> = summary.iter().filter(|r| r.sel == sel).collect();
        out.push((format!("time_{}.svg", sel.slug()), time_chart(sel, &rows)));
        out.push((format!("steps_{}.svg", sel.slug()), steps_chart(sel, &rows)));
    }
    out
}
