//! Parameter sets and panel layout of the published figures.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ctsim_core::Encoding;

use crate::csv::emit_csv;
use crate::error::{CliError, CliResult};
use crate::plot::{angle_label, write_svg, Chart, Quantity, Series};
use crate::sweep::{run_sweep, CurveRecord, SweepConfig};

pub const THETAS: [f64; 4] = [0.0, FRAC_PI_6, FRAC_PI_4, FRAC_PI_3];
pub const ALPHAS: [f64; 4] = [0.20, 0.50, 1.25, 2.50];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    /// VSP control power and conditioned fidelity.
    Fig2,
    /// Coherent control power and conditioned fidelity, per θ.
    Fig3,
    /// Efficiency of both encodings, per θ.
    Fig4,
    /// VSP Svetlichny maximum and its parametric plot against η.
    Fig5,
    /// Coherent Svetlichny maximum and parametric plot, per θ.
    Fig6,
}

impl FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "fig2" => Ok(FigureId::Fig2),
            "fig3" => Ok(FigureId::Fig3),
            "fig4" => Ok(FigureId::Fig4),
            "fig5" => Ok(FigureId::Fig5),
            "fig6" => Ok(FigureId::Fig6),
            other => Err(CliError::UnknownFigure(other.to_string())),
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            FigureId::Fig2 => 2,
            FigureId::Fig3 => 3,
            FigureId::Fig4 => 4,
            FigureId::Fig5 => 5,
            FigureId::Fig6 => 6,
        };
        write!(f, "fig{n}")
    }
}

struct Panel {
    name: String,
    records: Vec<CurveRecord>,
    chart: Chart,
}

fn sweep(encoding: Encoding, alphas: &[f64], svetlichny: bool, seed: u64) -> CliResult<Vec<CurveRecord>> {
    let mut cfg = SweepConfig::new(encoding, THETAS.to_vec(), alphas.to_vec());
    cfg.svetlichny = svetlichny;
    cfg.seed = seed;
    run_sweep(&cfg)
}

fn at_theta(records: &[CurveRecord], theta: f64) -> Vec<CurveRecord> {
    records.iter().filter(|r| r.theta == theta).copied().collect()
}

fn at_alpha(records: &[CurveRecord], alpha: Option<f64>) -> Vec<CurveRecord> {
    records.iter().filter(|r| r.alpha == alpha).copied().collect()
}

/// Line style follows the amplitude (α = 0.20 solid, 0.50 dashed, 1.25
/// dot-dashed, 2.50 dotted) or the angle for VSP panels.
fn style_index(rec: &CurveRecord) -> usize {
    match rec.alpha {
        Some(a) => ALPHAS.iter().position(|&x| x == a).unwrap_or(0),
        None => THETAS.iter().position(|&x| x == rec.theta).unwrap_or(0),
    }
}

fn series(label: String, recs: &[CurveRecord], x: impl Fn(&CurveRecord) -> Option<f64>, y: Quantity) -> Series {
    let style = recs.first().map(style_index).unwrap_or(0);
    Series {
        label,
        points: recs
            .iter()
            .filter_map(|r| Some((x(r)?, y.of(r)?)))
            .collect(),
        dash: style,
        color: style,
        markers: false,
    }
}

fn against_r(title: String, groups: Vec<(String, Vec<CurveRecord>)>, quantity: Quantity) -> Chart {
    Chart {
        title,
        x_label: "normalized time r".into(),
        y_label: quantity.label().into(),
        series: groups
            .iter()
            .map(|(label, recs)| series(label.clone(), recs, |r| Some(r.r), quantity))
            .collect(),
        guides: quantity.guides(),
    }
}

fn violating(recs: &[CurveRecord]) -> Vec<CurveRecord> {
    recs.iter()
        .filter(|r| r.sv_max.is_some_and(|s| s > 4.0))
        .copied()
        .collect()
}

fn parametric(title: String, groups: Vec<(String, Vec<CurveRecord>)>) -> Chart {
    Chart {
        title,
        x_label: "efficiency η".into(),
        y_label: Quantity::SvMax.label().into(),
        series: groups
            .iter()
            .map(|(label, recs)| series(label.clone(), recs, |r| Some(r.eta), Quantity::SvMax))
            .collect(),
        guides: Quantity::SvMax.guides(),
    }
}

fn theta_groups(records: &[CurveRecord]) -> Vec<(String, Vec<CurveRecord>)> {
    THETAS
        .iter()
        .map(|&t| (format!("θ = {}", angle_label(t)), at_theta(records, t)))
        .collect()
}

fn alpha_groups(records: &[CurveRecord], alphas: &[f64]) -> Vec<(String, Vec<CurveRecord>)> {
    alphas
        .iter()
        .map(|&a| (format!("α = {a:.2}"), at_alpha(records, Some(a))))
        .collect()
}

fn panels(id: FigureId, seed: u64) -> CliResult<Vec<Panel>> {
    let mut out = Vec::new();
    match id {
        FigureId::Fig2 => {
            let recs = sweep(Encoding::Vsp, &[], false, seed)?;
            out.push(Panel {
                name: "fig2_control_power".into(),
                chart: against_r("VSP control power".into(), theta_groups(&recs), Quantity::Cp),
                records: recs.clone(),
            });
            // F_c does not depend on θ, one series suffices
            let ghz = at_theta(&recs, 0.0);
            out.push(Panel {
                name: "fig2_conditioned_fidelity".into(),
                chart: against_r(
                    "VSP conditioned fidelity".into(),
                    vec![("any θ".into(), ghz.clone())],
                    Quantity::FC,
                ),
                records: ghz,
            });
        }
        FigureId::Fig3 => {
            let recs = sweep(Encoding::Coherent, &ALPHAS, false, seed)?;
            for (k, &theta) in THETAS.iter().enumerate() {
                let sub = at_theta(&recs, theta);
                let label = angle_label(theta);
                out.push(Panel {
                    name: format!("fig3_theta{k}_control_power"),
                    chart: against_r(
                        format!("coherent control power, θ = {label}"),
                        alpha_groups(&sub, &ALPHAS),
                        Quantity::Cp,
                    ),
                    records: sub.clone(),
                });
                out.push(Panel {
                    name: format!("fig3_theta{k}_conditioned_fidelity"),
                    chart: against_r(
                        format!("coherent conditioned fidelity, θ = {label}"),
                        alpha_groups(&sub, &ALPHAS),
                        Quantity::FC,
                    ),
                    records: sub,
                });
            }
        }
        FigureId::Fig4 => {
            let vsp = sweep(Encoding::Vsp, &[], false, seed)?;
            let coh = sweep(Encoding::Coherent, &ALPHAS, false, seed)?;
            for (k, &theta) in THETAS.iter().enumerate() {
                let vsp_sub = at_theta(&vsp, theta);
                let coh_sub = at_theta(&coh, theta);
                let mut chart = against_r(
                    format!("efficiency, θ = {}", angle_label(theta)),
                    alpha_groups(&coh_sub, &ALPHAS),
                    Quantity::Eta,
                );
                let mut line = series("VSP".into(), &vsp_sub, |r| Some(r.r), Quantity::Eta);
                line.dash = 0;
                line.color = 4;
                line.markers = true;
                chart.series.insert(0, line);
                let mut records = vsp_sub;
                records.extend(coh_sub);
                out.push(Panel {
                    name: format!("fig4_theta{k}_efficiency"),
                    records,
                    chart,
                });
            }
        }
        FigureId::Fig5 => {
            let recs = sweep(Encoding::Vsp, &[], true, seed)?;
            out.push(Panel {
                name: "fig5_svetlichny".into(),
                chart: against_r("VSP max |S_v|".into(), theta_groups(&recs), Quantity::SvMax),
                records: recs.clone(),
            });
            let viol = violating(&recs);
            out.push(Panel {
                name: "fig5_parametric".into(),
                chart: parametric("VSP max |S_v| against η".into(), theta_groups(&viol)),
                records: viol,
            });
        }
        FigureId::Fig6 => {
            let alphas = &ALPHAS[1..];
            let recs = sweep(Encoding::Coherent, alphas, true, seed)?;
            for (k, &theta) in THETAS.iter().enumerate() {
                let sub = at_theta(&recs, theta);
                let label = angle_label(theta);
                out.push(Panel {
                    name: format!("fig6_theta{k}_svetlichny"),
                    chart: against_r(
                        format!("coherent max |S_v|, θ = {label}"),
                        alpha_groups(&sub, alphas),
                        Quantity::SvMax,
                    ),
                    records: sub.clone(),
                });
                let viol = violating(&sub);
                out.push(Panel {
                    name: format!("fig6_theta{k}_parametric"),
                    chart: parametric(
                        format!("coherent max |S_v| against η, θ = {label}"),
                        alpha_groups(&viol, alphas),
                    ),
                    records: viol,
                });
            }
        }
    }
    Ok(out)
}

/// Writes `<panel>.csv` and `<panel>.svg` for every panel of the figure and
/// returns the written paths. A parametric panel with no violating point
/// gets a header-only CSV.
pub fn reproduce_figure(id: FigureId, out_dir: &Path, seed: u64) -> CliResult<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut written = Vec::new();
    for panel in panels(id, seed)? {
        let csv_path = out_dir.join(format!("{}.csv", panel.name));
        if panel.records.is_empty() {
            std::fs::write(&csv_path, format!("{}\n", crate::csv::CSV_HEADER))
                .map_err(|e| CliError::io(&csv_path, e))?;
        } else {
            emit_csv(&panel.records, &csv_path)?;
        }
        let svg_path = out_dir.join(format!("{}.svg", panel.name));
        write_svg(&panel.chart, &svg_path)?;
        written.push(csv_path);
        written.push(svg_path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ctsim_core::{closed_form_vsp, DampingParams, MsParams};

    #[test]
    fn ids_round_trip() {
        for s in ["fig2", "fig3", "fig4", "fig5", "fig6"] {
            assert_eq!(s.parse::<FigureId>().unwrap().to_string(), s);
        }
        assert!(matches!("fig7".parse::<FigureId>(), Err(CliError::UnknownFigure(_))));
    }

    #[test]
    fn fig2_layout_and_values() {
        let dir = tempfile::tempdir().unwrap();
        let files = reproduce_figure(FigureId::Fig2, dir.path(), 1).unwrap();
        assert_eq!(files.len(), 4);
        let left = std::fs::read_to_string(dir.path().join("fig2_control_power.svg")).unwrap();
        assert_eq!(left.matches("<polyline").count(), 4);
        let right = std::fs::read_to_string(dir.path().join("fig2_conditioned_fidelity.svg")).unwrap();
        assert_eq!(right.matches("<polyline").count(), 1);

        let csv = std::fs::read_to_string(dir.path().join("fig2_conditioned_fidelity.csv")).unwrap();
        for line in csv.lines().skip(1) {
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.parse().unwrap_or(f64::NAN))
                .collect();
            let (_, f_c) = closed_form_vsp(
                MsParams::new(cols[1]).unwrap(),
                DampingParams::new(cols[0]).unwrap(),
            );
            assert!((cols[3] - f_c).abs() < 1e-9);
        }
    }

    #[test]
    fn fig4_has_four_panels_with_vsp_markers() {
        let dir = tempfile::tempdir().unwrap();
        let files = reproduce_figure(FigureId::Fig4, dir.path(), 1).unwrap();
        assert_eq!(files.len(), 8);
        for k in 0..4 {
            let svg = std::fs::read_to_string(dir.path().join(format!("fig4_theta{k}_efficiency.svg"))).unwrap();
            assert_eq!(svg.matches("<polyline").count(), 5);
            assert!(svg.contains("<circle"));
        }
    }
}
