//! SVG line charts with error bars from result CSVs.
//!
//! Expected schema: the first column is the x axis and is named `n` or `gamma`; every
//! further column comes in `<name>_mean`, `<name>_std` pairs, one series per pair. `#`
//! lines are comments. Output is a pure function of the input bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{read_file, write_file, Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub x_label: String,
    pub x: Vec<f64>,
    pub series: Vec<Series>,
}

fn schema_error(found: &[String]) -> Error {
    Error::Schema(format!(
        "unexpected columns [{}]; expected `n` or `gamma` followed by `<name>_mean,<name>_std` pairs",
        found.join(", ")
    ))
}

pub fn parse_csv(bytes: &[u8]) -> Result<Chart> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(bytes);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let x_label = match header.first().map(String::as_str) {
        Some(x @ ("n" | "gamma")) => x.to_owned(),
        _ => return Err(schema_error(&header)),
    };
    let rest = &header[1..];
    if !rest.len().is_multiple_of(2) {
        return Err(schema_error(&header));
    }
    let mut series = Vec::new();
    for pair in rest.chunks(2) {
        let name = pair[0].strip_suffix("_mean").filter(|n| !n.is_empty());
        match name {
            Some(name) if pair[1].strip_suffix("_std") == Some(name) => series.push(Series {
                name: name.to_owned(),
                mean: Vec::new(),
                std: Vec::new(),
            }),
            _ => return Err(schema_error(&header)),
        }
    }
    let mut x = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(i + 2, |p| p.line() as usize);
        let num = |j: usize| -> Result<f64> {
            let s = rec.get(j).unwrap_or_default();
            s.trim().parse().map_err(|_| Error::parse(line, format!("`{s}` is not a number")))
        };
        x.push(num(0)?);
        for (s, ser) in series.iter_mut().enumerate() {
            ser.mean.push(num(1 + 2 * s)?);
            ser.std.push(num(2 + 2 * s)?);
        }
    }
    Ok(Chart { x_label, x, series })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = (-step.log10().floor() + 1.0).clamp(0.0, 8.0) as usize;
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_owned()
    } else {
        s
    }
}

pub fn render_svg(chart: &Chart) -> String {
    let (x0, x1) = range(chart.x.iter().copied());
    let (y0, y1) = range(chart.series.iter().flat_map(|s| {
        s.mean.iter().zip(&s.std).flat_map(|(m, d)| {
            let d = if d.is_finite() { *d } else { 0.0 };
            [m - d, m + d]
        })
    }));
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut o = String::new();
    writeln!(
        o,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(o, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    let (bx, by) = (LEFT + plot_w, TOP + plot_h);
    writeln!(o, r#"<path d="M{LEFT} {TOP}V{by}H{bx}" fill="none" stroke="black"/>"#).unwrap();
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        writeln!(
            o,
            r#"<line x1="{px:.2}" y1="{by}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            by + 5.0,
            by + 20.0,
            tick_label(xv, (x1 - x0) / 4.0)
        )
        .unwrap();
        writeln!(
            o,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            tick_label(yv, (y1 - y0) / 4.0)
        )
        .unwrap();
    }
    writeln!(
        o,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(&chart.x_label)
    )
    .unwrap();
    let y_label = chart.series.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(", ");
    writeln!(
        o,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(&y_label)
    )
    .unwrap();

    for (k, s) in chart.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<(f64, f64, f64)> = chart
            .x
            .iter()
            .zip(&s.mean)
            .zip(&s.std)
            .filter(|((x, m), _)| x.is_finite() && m.is_finite())
            .map(|((&x, &m), &d)| (x, m, if d.is_finite() { d } else { 0.0 }))
            .collect();
        writeln!(o, r#"<g stroke="{color}" fill="none">"#).unwrap();
        if pts.len() > 1 {
            let path: Vec<String> =
                pts.iter().map(|&(x, m, _)| format!("{:.2},{:.2}", sx(x), sy(m))).collect();
            writeln!(o, r#"<polyline points="{}" stroke-width="1.5"/>"#, path.join(" ")).unwrap();
        }
        for &(x, m, d) in &pts {
            let (px, lo, hi) = (sx(x), sy(m - d), sy(m + d));
            writeln!(
                o,
                r#"<path d="M{px:.2} {lo:.2}V{hi:.2}M{:.2} {lo:.2}H{:.2}M{:.2} {hi:.2}H{:.2}"/><circle cx="{px:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                px - 4.0,
                px + 4.0,
                px - 4.0,
                px + 4.0,
                sy(m)
            )
            .unwrap();
        }
        writeln!(o, "</g>").unwrap();
        let ly = TOP + 10.0 + 18.0 * k as f64;
        writeln!(
            o,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            bx + 15.0,
            bx + 35.0,
            bx + 40.0,
            ly + 4.0,
            escape(&s.name)
        )
        .unwrap();
    }
    o.push_str("</svg>\n");
    o
}

/// Reads `csv_path`, renders it and writes the SVG to `out`.
pub fn emit_plot(csv_path: &Path, out: &Path) -> Result<()> {
    let chart = parse_csv(&read_file(csv_path)?)?;
    write_file(out, render_svg(&chart).as_bytes())
}
