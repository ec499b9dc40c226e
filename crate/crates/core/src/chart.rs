//! Horizontal bar charts of one composite as standalone SVG.

use std::fmt::Write as _;

use crate::composite::{display_name, CompositeScoreSet};

const WIDTH: f64 = 640.0;
const LABEL_W: f64 = 120.0;
const VALUE_W: f64 = 56.0;
const BAR_H: f64 = 22.0;
const GAP: f64 = 6.0;
const TOP: f64 = 40.0;
const BAR_FILL: &str = "#4a78b5";
const REFERENCE_FILL: &str = "#c8553d";

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Bars sorted by descending score (ties keep table order); the reference
/// algorithm's bar is drawn in a contrasting colour. Same input, same bytes.
pub fn render_bar_chart(set: &CompositeScoreSet) -> String {
    let mut rows: Vec<(&str, f64)> = set.iter().map(|(a, s, _)| (a, s)).collect();
    rows.sort_by(|a, b| b.1.total_cmp(&a.1));

    let max = rows.iter().map(|r| r.1).fold(0.0f64, f64::max);
    let plot_w = WIDTH - LABEL_W - VALUE_W;
    let height = TOP + rows.len() as f64 * (BAR_H + GAP) + 10.0;
    let title = display_name(&set.composite);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        "<title>{} (reference {})</title>",
        escape(&title),
        escape(&set.reference)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" font-size="15" font-weight="bold">{}</text>"#,
        LABEL_W,
        escape(&title)
    );
    for (i, (alg, score)) in rows.iter().enumerate() {
        let y = TOP + i as f64 * (BAR_H + GAP);
        let w = if max > 0.0 { score / max * plot_w } else { 0.0 };
        let is_ref = *alg == set.reference;
        let fill = if is_ref { REFERENCE_FILL } else { BAR_FILL };
        let class = if is_ref { "bar reference" } else { "bar" };
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LABEL_W - 8.0,
            y + BAR_H * 0.7,
            escape(alg)
        );
        let _ = writeln!(
            s,
            r#"<rect class="{class}" x="{LABEL_W}" y="{y:.1}" width="{w:.2}" height="{BAR_H}" fill="{fill}"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.1}">{score:.2}</text>"#,
            LABEL_W + w + 4.0,
            y + BAR_H * 0.7
        );
    }
    s.push_str("</svg>\n");
    s
}
