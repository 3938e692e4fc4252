//! Deterministic SVG scatter plots.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::io::Table;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 56.0;
const RADIUS: f64 = 0.5;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scatter {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Category per point; equal categories share a color.
    pub color: Option<Vec<String>>,
    pub x_label: String,
    pub y_label: String,
}

impl Scatter {
    /// Plots the first two columns, colored by `color` if given.
    pub fn from_table(table: &Table, color: Option<&str>) -> Result<Self> {
        if table.header.is_empty() {
            return Ok(Self {
                x_label: "x".into(),
                y_label: "y".into(),
                ..Self::default()
            });
        }
        if table.header.len() < 2 {
            return Err(Error::BadCsv("need at least two columns".into()));
        }
        let color = match color {
            None => None,
            Some(name) => {
                let col = table
                    .column(name)
                    .ok_or_else(|| Error::BadCsv(format!("no column named {name}")))?;
                Some(
                    table
                        .rows
                        .iter()
                        .map(|r| r.get(col).cloned().unwrap_or_default())
                        .collect(),
                )
            }
        };
        Ok(Self {
            x: table.numeric(0)?,
            y: table.numeric(1)?,
            color,
            x_label: table.header[0].clone(),
            y_label: table.header[1].clone(),
        })
    }
}

fn range(values: &[f64]) -> (f64, f64) {
    let finite = values.iter().copied().filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
        (l.min(v), h.max(v))
    });
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Tick positions at a 1-2-5 step, and the number of decimals to print.
fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), decimals)
}

pub fn render(plot: &Scatter) -> String {
    let (x0, x1) = range(&plot.x);
    let (y0, y1) = range(&plot.y);
    let inner_w = WIDTH - 2.0 * MARGIN;
    let inner_h = HEIGHT - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * inner_w;
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * inner_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    let (bottom, left) = (HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{left}" y1="{bottom}" x2="{}" y2="{bottom}"/><line x1="{left}" y1="{bottom}" x2="{left}" y2="{MARGIN}"/></g>"#,
        WIDTH - MARGIN
    );
    s.push_str(r#"<g font-family="sans-serif" font-size="11" fill="black">"#);
    s.push('\n');
    let (xt, xd) = ticks(x0, x1);
    for t in xt {
        let x = px(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t:.xd$}</text>"#,
            bottom + 4.0,
            bottom + 17.0
        );
    }
    let (yt, yd) = ticks(y0, y1);
    for t in yt {
        let y = py(t);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{t:.yd$}</text>"#,
            left - 4.0,
            left - 7.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(&plot.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&plot.y_label)
    );
    s.push_str("</g>\n");

    let colors: BTreeMap<&str, &str> = plot
        .color
        .iter()
        .flatten()
        .map(String::as_str)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, PALETTE[i % PALETTE.len()]))
        .collect();
    s.push_str(r#"<g stroke="none" fill="black">"#);
    s.push('\n');
    for (i, (&x, &y)) in plot.x.iter().zip(&plot.y).enumerate() {
        if !(x.is_finite() && y.is_finite()) {
            continue;
        }
        let _ = write!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{RADIUS}""#,
            px(x),
            py(y)
        );
        if let Some(key) = plot.color.as_ref().and_then(|c| c.get(i)) {
            let _ = write!(s, r#" fill="{}""#, colors[key.as_str()]);
        }
        s.push_str("/>\n");
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
