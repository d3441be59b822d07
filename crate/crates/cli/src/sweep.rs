use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use ctsim_core::{
    ct_pipeline_coherent, ct_pipeline_vsp, damp_vsp, maximize_svetlichny, ms_state_vsp,
    CoherentEncoding, CoherentFrameState, CtFigures, DampingParams, Encoding, MaximizeOptions,
    MsParams, SvetlichnyTarget,
};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

/// Evenly spaced r values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for RGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 1.0,
            step: 0.01,
        }
    }
}

impl RGrid {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.step > 0.0) {
            return Err(CliError::config("r-step", format!("{} must be positive", self.step)));
        }
        for (field, v) in [("r-start", self.start), ("r-stop", self.stop)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::config(field, format!("{v} outside [0, 1]")));
            }
        }
        if self.stop < self.start {
            return Err(CliError::config("r-stop", "must not be below r-start"));
        }
        Ok(())
    }

    /// Points start + k·step, snapped to `stop` when within rounding of it.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        let mut out: Vec<f64> = (0..=n).map(|k| self.start + k as f64 * self.step).collect();
        if let Some(last) = out.last_mut() {
            if (*last - self.stop).abs() < 1e-9 * self.step.max(1.0) {
                *last = self.stop;
            }
        }
        out.iter_mut().for_each(|r| *r = r.min(1.0));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub encoding: Encoding,
    pub thetas: Vec<f64>,
    /// Coherent amplitudes; must be empty for VSP.
    pub alphas: Vec<f64>,
    pub r_grid: RGrid,
    /// Also maximize the Svetlichny function at every point.
    pub svetlichny: bool,
    pub n_starts: usize,
    pub seed: u64,
    pub out_path: Option<PathBuf>,
}

impl SweepConfig {
    pub fn new(encoding: Encoding, thetas: Vec<f64>, alphas: Vec<f64>) -> Self {
        Self {
            encoding,
            thetas,
            alphas,
            r_grid: RGrid::default(),
            svetlichny: false,
            n_starts: 64,
            seed: ctsim_core::DEFAULT_SEED,
            out_path: None,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        self.r_grid.validate()?;
        if self.thetas.is_empty() {
            return Err(CliError::config("theta", "at least one angle is required"));
        }
        if let Some(t) = self.thetas.iter().find(|t| !(0.0..=FRAC_PI_2).contains(*t)) {
            return Err(CliError::config("theta", format!("{t} outside [0, π/2]")));
        }
        match self.encoding {
            Encoding::Vsp if !self.alphas.is_empty() => {
                return Err(CliError::config("alpha", "only valid with the coherent encoding"))
            }
            Encoding::Coherent if self.alphas.is_empty() => {
                return Err(CliError::config("alpha", "required with the coherent encoding"))
            }
            _ => {}
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
            return Err(CliError::config("alpha", format!("{a} must be a nonnegative real")));
        }
        if self.svetlichny && self.n_starts == 0 {
            return Err(CliError::config("n-starts", "must be at least 1"));
        }
        Ok(())
    }
}

/// One sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRecord {
    pub r: f64,
    pub theta: f64,
    pub alpha: Option<f64>,
    pub f_c: f64,
    pub f_nc: f64,
    pub c_p: f64,
    pub eta: f64,
    pub sv_max: Option<f64>,
}

impl CurveRecord {
    fn sort_key(&self) -> (f64, f64, f64) {
        (self.theta, self.alpha.unwrap_or(-1.0), self.r)
    }
}

/// Evaluates every (θ, α, r) point; records come back ordered by (θ, α, r).
pub fn run_sweep(cfg: &SweepConfig) -> CliResult<Vec<CurveRecord>> {
    cfg.validate()?;
    let alphas: Vec<Option<f64>> = match cfg.encoding {
        Encoding::Vsp => vec![None],
        Encoding::Coherent => cfg.alphas.iter().map(|&a| Some(a)).collect(),
    };
    let mut points = Vec::new();
    for &theta in &cfg.thetas {
        for &alpha in &alphas {
            for r in cfg.r_grid.points() {
                points.push((theta, alpha, r));
            }
        }
    }
    let opts = MaximizeOptions {
        n_starts: cfg.n_starts,
        seed: cfg.seed,
        ..MaximizeOptions::default()
    };
    let mut records = points
        .into_par_iter()
        .map(|(theta, alpha, r)| evaluate_point(theta, alpha, r, cfg.svetlichny.then_some(&opts)))
        .collect::<CliResult<Vec<_>>>()?;
    records.sort_by(|a, b| {
        let (x, y) = (a.sort_key(), b.sort_key());
        x.0.total_cmp(&y.0)
            .then(x.1.total_cmp(&y.1))
            .then(x.2.total_cmp(&y.2))
    });
    Ok(records)
}

/// Figures (and optionally max |S_v|) at one grid point; `alpha` selects the
/// coherent encoding.
pub fn evaluate_point(
    theta: f64,
    alpha: Option<f64>,
    r: f64,
    svetlichny: Option<&MaximizeOptions>,
) -> CliResult<CurveRecord> {
    let params = MsParams::new(theta)?;
    let p = DampingParams::new(r)?;
    let (fig, target): (CtFigures, Option<SvetlichnyTarget>) = match alpha {
        None => {
            let fig = ct_pipeline_vsp(params, p)?;
            let target = match svetlichny {
                Some(_) => Some(SvetlichnyTarget::Qubits(damp_vsp(
                    &ms_state_vsp(params).to_density(),
                    p,
                )?)),
                None => None,
            };
            (fig, target)
        }
        Some(a) => {
            let fig = ct_pipeline_coherent(params, CoherentEncoding::new(a)?, p)?;
            let target = match svetlichny {
                Some(_) => Some(SvetlichnyTarget::CoherentFrame(
                    CoherentFrameState::ms_state(params, a)?.damp(p),
                )),
                None => None,
            };
            (fig, target)
        }
    };
    let sv_max = match (target, svetlichny) {
        (Some(t), Some(opts)) => Some(maximize_svetlichny(&t, opts)?.value),
        _ => None,
    };
    Ok(CurveRecord {
        r,
        theta,
        alpha,
        f_c: fig.f_c,
        f_nc: fig.f_nc,
        c_p: fig.c_p,
        eta: fig.eta,
        sv_max,
    })
}

/// Parses an angle such as `0.3`, `pi/6`, `2pi/3`, `2*pi/3` or `pi`.
pub fn parse_angle(text: &str) -> CliResult<f64> {
    let bad = || CliError::config("theta", format!("cannot parse angle `{text}`"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let s = s.replace('π', "pi");
    let Some(idx) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let head = s[..idx].trim_end_matches('*');
    let tail = &s[idx + 2..];
    let factor = if head.is_empty() {
        1.0
    } else {
        head.parse::<f64>().map_err(|_| bad())?
    };
    let divisor = match tail.strip_prefix('/') {
        Some(d) => d.parse::<f64>().map_err(|_| bad())?,
        None if tail.is_empty() => 1.0,
        None => return Err(bad()),
    };
    if divisor == 0.0 {
        return Err(bad());
    }
    Ok(factor * PI / divisor)
}
