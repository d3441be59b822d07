//! Minimal self-contained SVG line charts.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};
use crate::sweep::CurveRecord;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
/// solid, dashed, dot-dashed, dotted
const DASHES: [&str; 4] = ["", "8 4", "8 3 2 3", "2 3"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    FC,
    FNc,
    Cp,
    Eta,
    SvMax,
}

impl Quantity {
    pub fn label(&self) -> &'static str {
        match self {
            Quantity::FC => "F_c",
            Quantity::FNc => "F_nc",
            Quantity::Cp => "C_p",
            Quantity::Eta => "η",
            Quantity::SvMax => "|S_v|max",
        }
    }

    pub fn of(&self, rec: &CurveRecord) -> Option<f64> {
        match self {
            Quantity::FC => Some(rec.f_c),
            Quantity::FNc => Some(rec.f_nc),
            Quantity::Cp => Some(rec.c_p),
            Quantity::Eta => Some(rec.eta),
            Quantity::SvMax => rec.sv_max,
        }
    }

    /// Reference lines drawn under the data.
    pub fn guides(&self) -> Vec<Guide> {
        match self {
            Quantity::FC | Quantity::FNc => vec![Guide::dashed(2.0 / 3.0, "2/3")],
            Quantity::SvMax => vec![Guide::dashed(4.0, "4"), Guide::dotted(4.0 * SQRT_2, "4√2")],
            _ => Vec::new(),
        }
    }
}

impl FromStr for Quantity {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "F_c" | "f_c" | "fc" => Ok(Quantity::FC),
            "F_nc" | "f_nc" | "fnc" => Ok(Quantity::FNc),
            "C_p" | "c_p" | "cp" => Ok(Quantity::Cp),
            "eta" => Ok(Quantity::Eta),
            "sv_max" => Ok(Quantity::SvMax),
            other => Err(CliError::UnknownQuantity(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Guide {
    pub y: f64,
    pub label: String,
    pub dash: &'static str,
}

impl Guide {
    pub fn dashed(y: f64, label: &str) -> Self {
        Self {
            y,
            label: label.into(),
            dash: "6 4",
        }
    }

    pub fn dotted(y: f64, label: &str) -> Self {
        Self {
            y,
            label: label.into(),
            dash: "2 3",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Index into the dash table (solid, dashed, dot-dashed, dotted).
    pub dash: usize,
    pub color: usize,
    pub markers: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub guides: Vec<Guide>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Pretty label for common fractions of π.
pub fn angle_label(theta: f64) -> String {
    let ratio = theta / std::f64::consts::PI;
    for (den, num_max) in [(1, 2), (2, 1), (3, 1), (4, 1), (6, 1), (8, 3), (12, 5)] {
        for num in 1..=num_max {
            if (ratio - num as f64 / den as f64).abs() < 1e-9 {
                return match (num, den) {
                    (1, 1) => "π".into(),
                    (n, 1) => format!("{n}π"),
                    (1, d) => format!("π/{d}"),
                    (n, d) => format!("{n}π/{d}"),
                };
            }
        }
    }
    if theta == 0.0 {
        "0".into()
    } else {
        format!("{theta:.4}")
    }
}

pub fn series_label(theta: Option<f64>, alpha: Option<f64>) -> String {
    match (theta, alpha) {
        (Some(t), Some(a)) => format!("θ = {}, α = {a:.2}", angle_label(t)),
        (Some(t), None) => format!("θ = {}", angle_label(t)),
        (None, Some(a)) => format!("α = {a:.2}"),
        (None, None) => "VSP".into(),
    }
}

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if !(hi > lo) {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Renders the chart; deterministic for equal input.
pub fn render_svg(chart: &Chart) -> String {
    let xs = chart.series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in xs {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
    }
    if !x_lo.is_finite() {
        (x_lo, x_hi) = (0.0, 1.0);
    }
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for y in chart
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .chain(chart.guides.iter().map(|g| g.y))
    {
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    if !y_lo.is_finite() {
        (y_lo, y_hi) = (0.0, 1.0);
    }
    let (x_lo, x_hi) = if x_hi > x_lo { (x_lo, x_hi) } else { nice_range(x_lo, x_hi) };
    let (y_lo, y_hi) = nice_range(y_lo, y_hi);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(&chart.title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for k in 0..=5 {
        let t = k as f64 / 5.0;
        let (x, y) = (x_lo + t * (x_hi - x_lo), y_lo + t * (y_hi - y_lo));
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/><text x="{0:.2}" y="{3:.2}" text-anchor="middle">{4:.2}</text>"#,
            px(x),
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 18.0,
            x
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{2:.2}" y2="{1:.2}" stroke="black"/><text x="{3:.2}" y="{4:.2}" text-anchor="end">{5:.3}</text>"#,
            LEFT - 5.0,
            py(y),
            LEFT,
            LEFT - 8.0,
            py(y) + 4.0,
            y
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(&chart.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{0:.2}" text-anchor="middle" transform="rotate(-90 18 {0:.2})">{1}</text>"#,
        TOP + plot_h / 2.0,
        escape(&chart.y_label)
    );
    for g in &chart.guides {
        let _ = writeln!(
            svg,
            r##"<line class="guide" x1="{LEFT}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="#555" stroke-dasharray="{2}"/><text x="{3:.2}" y="{4:.2}" fill="#555">{5}</text>"##,
            py(g.y),
            LEFT + plot_w,
            g.dash,
            LEFT + plot_w + 4.0,
            py(g.y) + 4.0,
            escape(&g.label)
        );
    }
    for s in chart.series.iter().filter(|s| !s.points.is_empty()) {
        let color = COLORS[s.color % COLORS.len()];
        let dash = DASHES[s.dash % DASHES.len()];
        let coords: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} points="{}"/>"#,
            coords.join(" ")
        );
        if s.markers {
            let every = (s.points.len() / 20).max(1);
            for &(x, y) in s.points.iter().step_by(every) {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="none" stroke="{color}"/>"#,
                    px(x),
                    py(y)
                );
            }
        }
    }
    for (k, s) in chart.series.iter().enumerate() {
        let y = TOP + 12.0 + 18.0 * k as f64;
        let x = LEFT + plot_w + 40.0;
        let color = COLORS[s.color % COLORS.len()];
        let dash = DASHES[s.dash % DASHES.len()];
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="1.5" stroke-dasharray="{}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            x + 24.0,
            if dash.is_empty() { "none" } else { dash },
            x + 28.0,
            y + 4.0,
            escape(&s.label)
        );
        if s.markers {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{y:.2}" r="3" fill="none" stroke="{color}"/>"#,
                x + 12.0
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// One series per (θ, α) pair of `records`, plotted against r.
pub fn chart_from_records(records: &[CurveRecord], quantity: Quantity, title: &str) -> Chart {
    let mut groups: BTreeMap<(u64, u64), Vec<&CurveRecord>> = BTreeMap::new();
    for rec in records {
        let key = (rec.theta.to_bits(), rec.alpha.map_or(0, |a| a.to_bits() + 1));
        groups.entry(key).or_default().push(rec);
    }
    let multiple_thetas = {
        let mut t: Vec<u64> = groups.keys().map(|k| k.0).collect();
        t.dedup();
        t.len() > 1
    };
    let series = groups
        .values()
        .enumerate()
        .map(|(k, recs)| {
            let first = recs[0];
            let theta = (multiple_thetas || first.alpha.is_none()).then_some(first.theta);
            Series {
                label: series_label(theta, first.alpha),
                points: recs
                    .iter()
                    .filter_map(|r| quantity.of(r).map(|v| (r.r, v)))
                    .collect(),
                dash: k,
                color: k,
                markers: false,
            }
        })
        .collect();
    Chart {
        title: title.to_string(),
        x_label: "normalized time r".into(),
        y_label: quantity.label().into(),
        series,
        guides: quantity.guides(),
    }
}

pub fn write_svg(chart: &Chart, path: &Path) -> CliResult<()> {
    std::fs::write(path, render_svg(chart)).map_err(|e| CliError::io(path, e))
}

/// Line chart of `quantity` against r, one series per (θ, α) pair.
pub fn emit_plot(records: &[CurveRecord], path: &Path, quantity: Quantity) -> CliResult<()> {
    if records.is_empty() {
        return Err(CliError::NoRecords);
    }
    write_svg(&chart_from_records(records, quantity, quantity.label()), path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn records(theta: f64, alpha: Option<f64>, sv: Option<f64>) -> Vec<CurveRecord> {
        (0..=10)
            .map(|k| CurveRecord {
                r: k as f64 / 10.0,
                theta,
                alpha,
                f_c: 1.0 - 0.03 * k as f64,
                f_nc: 0.7,
                c_p: 1.0,
                eta: 0.5,
                sv_max: sv,
            })
            .collect()
    }

    #[test]
    fn single_series_single_polyline() {
        let chart = chart_from_records(&records(0.0, None, None), Quantity::FC, "F_c");
        let svg = render_svg(&chart);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("normalized time r"));
        assert!(svg.contains(">2/3<"));
    }

    #[test]
    fn one_series_per_pair() {
        let mut recs = records(0.0, Some(0.5), None);
        recs.extend(records(0.0, Some(2.5), None));
        recs.extend(records(0.5, Some(0.5), None));
        let svg = render_svg(&chart_from_records(&recs, Quantity::Cp, "C_p"));
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(!svg.contains("class=\"guide\""));
    }

    #[test]
    fn svetlichny_guides() {
        let chart = chart_from_records(&records(0.0, None, Some(5.0)), Quantity::SvMax, "S");
        let svg = render_svg(&chart);
        assert_eq!(svg.matches("class=\"guide\"").count(), 2);
        assert!(svg.contains(">4<"));
        assert!(svg.contains("4√2"));
    }

    #[test]
    fn deterministic_and_quantity_parsing() {
        let chart = chart_from_records(&records(0.3, None, None), Quantity::Eta, "η");
        assert_eq!(render_svg(&chart), render_svg(&chart));
        assert_eq!("eta".parse::<Quantity>().unwrap(), Quantity::Eta);
        assert!(matches!("bogus".parse::<Quantity>(), Err(CliError::UnknownQuantity(_))));
    }

    #[test]
    fn angle_labels() {
        assert_eq!(angle_label(0.0), "0");
        assert_eq!(angle_label(std::f64::consts::FRAC_PI_6), "π/6");
        assert_eq!(angle_label(std::f64::consts::FRAC_PI_3), "π/3");
        assert_eq!(angle_label(0.3), "0.3000");
    }
}
