//! Svetlichny function of the (controller, Alice, Bob) state.
//!
//! S = Σ ± E(A, B, C) over the two settings of each party, with sign + when
//! at most one party uses its primed setting. Local hidden-variable models
//! with arbitrary bipartite nonlocality obey |S| ≤ 4; quantum states reach
//! 4√2.
//!
//! Every state handled here is written as ρ = Σᵢⱼ Cᵢⱼ |fᵢ⟩⟨fⱼ| over a product
//! frame, so a correlator is Σᵢⱼ Cᵢⱼ ⟨fⱼ|C⊗A⊗B|fᵢ⟩ and only needs the local
//! frame matrices ⟨fⱼ|X|fᵢ⟩ of each observable. For qubits the frame is the
//! computational basis; for coherent modes it is {|γ⟩, |−γ⟩}, where displaced
//! parity has closed-form matrix elements.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{frame_sign, CoherentFrameState};
use crate::hilbert::{ComplexMatrix, DensityOperator, C64};
use crate::optimize::{multistart, nelder_mead, NelderMeadOptions};
use crate::{Error, Result};

/// Bloch-sphere direction of a dichotomic qubit observable,
/// ω ∈ [0, π] polar and δ ∈ [0, 2π] azimuthal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitSetting {
    omega: f64,
    delta: f64,
}

impl QubitSetting {
    pub fn new(omega: f64, delta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&omega) || !(0.0..=TAU).contains(&delta) {
            return Err(Error::InvalidParameter(format!(
                "qubit setting (ω = {omega}, δ = {delta}) outside [0, π] × [0, 2π]"
            )));
        }
        Ok(Self { omega, delta })
    }

    /// Maps any real pair to the equivalent setting inside the box, using
    /// (ω, δ) ~ (2π − ω, δ + π) and 2π-periodicity.
    pub fn canonical(omega: f64, delta: f64) -> Self {
        let mut omega = omega.rem_euclid(TAU);
        let mut delta = delta;
        if omega > PI {
            omega = TAU - omega;
            delta += PI;
        }
        let delta = delta.rem_euclid(TAU);
        Self { omega, delta }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Rotation parameter ζ = −ω e^{−iδ}/2.
    pub fn zeta(&self) -> C64 {
        C64::from_polar(-0.5 * self.omega, -self.delta)
    }
}

/// Displacement of a displaced-parity observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSetting {
    pub beta: C64,
}

/// Observable setting of Alice or Bob.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PartySetting {
    Qubit(QubitSetting),
    Mode(ModeSetting),
}

/// Two settings (unprimed, primed) per party.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvetlichnySettings {
    pub charlie: [QubitSetting; 2],
    pub alice: [PartySetting; 2],
    pub bob: [PartySetting; 2],
}

impl SvetlichnySettings {
    /// Flattens to twelve reals: (ω, δ) per qubit setting, (Re β, Im β) per mode
    /// setting, ordered Charlie, Alice, Bob and unprimed before primed.
    pub fn to_params(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        for (k, s) in self.charlie.iter().enumerate() {
            out[2 * k] = s.omega;
            out[2 * k + 1] = s.delta;
        }
        for (k, s) in self.alice.iter().chain(&self.bob).enumerate() {
            let (x, y) = match s {
                PartySetting::Qubit(q) => (q.omega, q.delta),
                PartySetting::Mode(m) => (m.beta.re, m.beta.im),
            };
            out[4 + 2 * k] = x;
            out[5 + 2 * k] = y;
        }
        out
    }

    /// Inverse of [`to_params`](Self::to_params); qubit pairs are
    /// canonicalized and mode pairs are taken as given.
    pub fn from_params(params: &[f64], modes: bool) -> Result<Self> {
        if params.len() != 12 {
            return Err(Error::InvalidParameter(format!(
                "expected 12 parameters, got {}",
                params.len()
            )));
        }
        let party = |k: usize| {
            let (x, y) = (params[4 + 2 * k], params[5 + 2 * k]);
            if modes {
                PartySetting::Mode(ModeSetting {
                    beta: C64::new(x, y),
                })
            } else {
                PartySetting::Qubit(QubitSetting::canonical(x, y))
            }
        };
        Ok(Self {
            charlie: [
                QubitSetting::canonical(params[0], params[1]),
                QubitSetting::canonical(params[2], params[3]),
            ],
            alice: [party(0), party(1)],
            bob: [party(2), party(3)],
        })
    }
}

/// Ω = R σ_z R† with R = [[cos|ζ|, (ζ/|ζ|) sin|ζ|], [−(ζ*/|ζ|) sin|ζ|, cos|ζ|]].
///
/// Equals n·σ with n = (sin ω cos δ, sin ω sin δ, cos ω).
pub fn rotated_sigma_z(s: QubitSetting) -> ComplexMatrix {
    let (sin, cos) = (0.5 * s.omega).sin_cos();
    // ζ/|ζ| = −e^{−iδ}, well defined at ω = 0 where the sine vanishes anyway
    let unit = -C64::from_polar(1.0, -s.delta);
    let r = ComplexMatrix::from_vec(
        2,
        2,
        vec![
            C64::new(cos, 0.0),
            unit * sin,
            -unit.conj() * sin,
            C64::new(cos, 0.0),
        ],
    )
    .expect("2x2");
    let sz = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2");
    r.matmul(&sz).matmul(&r.adjoint())
}

/// Largest |β| for which the truncated displacement is trusted.
pub fn displacement_bound(n_max: usize) -> f64 {
    (n_max as f64).sqrt() / 3.0
}

/// D(β) P D†(β) in the Fock basis {|0⟩, …, |n_max − 1⟩}, with P the photon
/// number parity and D(β) = exp(βa† − β*a) built from truncated ladder
/// operators.
pub fn displaced_parity(s: ModeSetting, n_max: usize) -> Result<ComplexMatrix> {
    let bound = displacement_bound(n_max);
    if s.beta.norm() > bound {
        return Err(Error::DisplacementOutOfRange {
            beta: s.beta.norm(),
            bound,
        });
    }
    let mut generator = ComplexMatrix::zeros(n_max, n_max);
    for n in 1..n_max {
        let amp = (n as f64).sqrt();
        generator[(n, n - 1)] = s.beta * amp;
        generator[(n - 1, n)] = -s.beta.conj() * amp;
    }
    let d = generator.expm();
    let parity: Vec<C64> = (0..n_max)
        .map(|n| C64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
        .collect();
    let mut out = d.matmul(&ComplexMatrix::from_diag(&parity)).matmul(&d.adjoint());
    out.symmetrize();
    Ok(out)
}

/// ⟨a|Π(β)|b⟩ for real coherent amplitudes a, b:
/// Π(β)|b⟩ = e^{−2i Im(β b)} |2β − b⟩.
pub fn displaced_parity_coherent_element(a: f64, b: f64, beta: C64) -> C64 {
    let phase = C64::from_polar(1.0, -2.0 * (beta * b).im);
    let x = beta * 2.0 - b;
    let overlap = (-0.5 * a * a - 0.5 * x.norm_sqr() + x * a).exp();
    phase * overlap
}

/// State on which the Svetlichny function is evaluated.
#[derive(Debug, Clone)]
pub enum SvetlichnyTarget {
    /// Three qubits, dims (2, 2, 2); all parties use rotated Pauli observables.
    Qubits(DensityOperator),
    /// Controller qubit and two coherent modes in the {|±γ⟩} frame.
    CoherentFrame(CoherentFrameState),
    /// Controller qubit and two truncated Fock modes, dims (2, n, n).
    Fock(DensityOperator),
}

impl SvetlichnyTarget {
    fn uses_modes(&self) -> bool {
        !matches!(self, SvetlichnyTarget::Qubits(_))
    }

    fn check(&self) -> Result<()> {
        match self {
            SvetlichnyTarget::Qubits(rho) if rho.dims() != [2, 2, 2] => Err(Error::DimensionMismatch(
                format!("qubit target needs dims [2, 2, 2], got {:?}", rho.dims()),
            )),
            SvetlichnyTarget::Fock(rho) if rho.dims().len() != 3 || rho.dims()[0] != 2 => {
                Err(Error::DimensionMismatch(format!(
                    "mode target needs dims [2, n, n], got {:?}",
                    rho.dims()
                )))
            }
            _ => Ok(()),
        }
    }

    /// Box for Re β and Im β during maximization.
    fn beta_max(&self) -> f64 {
        match self {
            SvetlichnyTarget::Qubits(_) => 0.0,
            SvetlichnyTarget::CoherentFrame(state) => 2.0 * (state.gamma() + 1.0),
            SvetlichnyTarget::Fock(rho) => {
                displacement_bound(rho.dims()[1].min(rho.dims()[2])) / std::f64::consts::SQRT_2
            }
        }
    }

    fn coeffs(&self) -> &ComplexMatrix {
        match self {
            SvetlichnyTarget::Qubits(rho) | SvetlichnyTarget::Fock(rho) => rho.matrix(),
            SvetlichnyTarget::CoherentFrame(state) => state.coeffs(),
        }
    }

    fn mode_dims(&self) -> (usize, usize) {
        match self {
            SvetlichnyTarget::Qubits(_) | SvetlichnyTarget::CoherentFrame(_) => (2, 2),
            SvetlichnyTarget::Fock(rho) => (rho.dims()[1], rho.dims()[2]),
        }
    }

    /// Frame matrix G[j][i] = ⟨fⱼ|X|fᵢ⟩ of one of Alice's or Bob's observables.
    fn local_matrix(&self, s: &PartySetting, dim: usize) -> Result<ComplexMatrix> {
        match (self, s) {
            (SvetlichnyTarget::Qubits(_), PartySetting::Qubit(q)) => Ok(rotated_sigma_z(*q)),
            (SvetlichnyTarget::CoherentFrame(state), PartySetting::Mode(m)) => {
                let g = state.gamma();
                let mut out = ComplexMatrix::zeros(2, 2);
                for j in 0..2 {
                    for i in 0..2 {
                        out[(j, i)] =
                            displaced_parity_coherent_element(frame_sign(j) * g, frame_sign(i) * g, m.beta);
                    }
                }
                Ok(out)
            }
            (SvetlichnyTarget::Fock(_), PartySetting::Mode(m)) => displaced_parity(*m, dim),
            _ => Err(Error::InvalidParameter(
                "setting kind does not match the target encoding".into(),
            )),
        }
    }
}

/// +1 when at most one of the three settings is primed.
fn svetlichny_sign(a: usize, b: usize, c: usize) -> f64 {
    if a + b + c <= 1 {
        1.0
    } else {
        -1.0
    }
}

/// Σᵢⱼ Cᵢⱼ Oⱼᵢ with O = Σ ± C_c ⊗ A_a ⊗ B_b over a (2, d1, d2) frame,
/// contracted one party at a time.
fn contract(
    coeffs: &ComplexMatrix,
    (d1, d2): (usize, usize),
    charlie: &[ComplexMatrix; 2],
    alice: &[ComplexMatrix; 2],
    bob: &[ComplexMatrix; 2],
) -> C64 {
    let n = 2 * d1 * d2;
    let m = d1 * d2;
    let zero = C64::new(0.0, 0.0);
    let mut total = zero;
    let mut x = vec![zero; m * m];
    let mut y = vec![zero; d2 * d2];
    for (c, cmat) in charlie.iter().enumerate() {
        // x[(i1 i2), (j1 j2)] = Σ C[(i0 i1 i2), (j0 j1 j2)] Ω[j0, i0]
        x.iter_mut().for_each(|v| *v = zero);
        for i0 in 0..2 {
            for j0 in 0..2 {
                let w = cmat[(j0, i0)];
                if w == zero {
                    continue;
                }
                for i in 0..m {
                    let row = &coeffs.as_slice()[(i0 * m + i) * n + j0 * m..(i0 * m + i) * n + j0 * m + m];
                    for (xv, cv) in x[i * m..(i + 1) * m].iter_mut().zip(row) {
                        *xv += cv * w;
                    }
                }
            }
        }
        for (a, amat) in alice.iter().enumerate() {
            y.iter_mut().for_each(|v| *v = zero);
            for i1 in 0..d1 {
                for j1 in 0..d1 {
                    let w = amat[(j1, i1)];
                    if w == zero {
                        continue;
                    }
                    for i2 in 0..d2 {
                        let base = (i1 * d2 + i2) * m + j1 * d2;
                        for j2 in 0..d2 {
                            y[i2 * d2 + j2] += x[base + j2] * w;
                        }
                    }
                }
            }
            for (b, bmat) in bob.iter().enumerate() {
                let sign = svetlichny_sign(a, b, c);
                let mut acc = zero;
                for i2 in 0..d2 {
                    for j2 in 0..d2 {
                        acc += y[i2 * d2 + j2] * bmat[(j2, i2)];
                    }
                }
                total += acc * sign;
            }
        }
    }
    total
}

fn evaluate(target: &SvetlichnyTarget, settings: &SvetlichnySettings) -> Result<C64> {
    let (d1, d2) = target.mode_dims();
    let charlie = [
        rotated_sigma_z(settings.charlie[0]),
        rotated_sigma_z(settings.charlie[1]),
    ];
    let alice = [
        target.local_matrix(&settings.alice[0], d1)?,
        target.local_matrix(&settings.alice[1], d1)?,
    ];
    let bob = [
        target.local_matrix(&settings.bob[0], d2)?,
        target.local_matrix(&settings.bob[1], d2)?,
    ];
    Ok(contract(target.coeffs(), (d1, d2), &charlie, &alice, &bob))
}

/// Svetlichny function S for the given settings. Errors if the target has
/// the wrong shape, the setting kinds do not match it, or the result is not
/// real.
pub fn svetlichny_value(target: &SvetlichnyTarget, settings: &SvetlichnySettings) -> Result<f64> {
    target.check()?;
    let s = evaluate(target, settings)?;
    if s.im.abs() > 1e-8 {
        return Err(Error::InvalidState(format!(
            "Svetlichny function has imaginary part {}",
            s.im
        )));
    }
    Ok(s.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizeOptions {
    pub n_starts: usize,
    /// Convergence tolerance on the objective.
    pub tol: f64,
    pub seed: u64,
    /// Evaluation budget of each local search.
    pub max_evals: usize,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            n_starts: 64,
            tol: 1e-8,
            seed: crate::DEFAULT_SEED,
            max_evals: 40_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvetlichnyMax {
    /// max |S| found.
    pub value: f64,
    pub settings: SvetlichnySettings,
    pub start_index: usize,
    pub evaluations: usize,
}

/// Multi-start simplex maximization of |S| over the twelve setting parameters.
///
/// Qubit angles are sampled uniformly from [0, π] × [0, 2π] and treated as
/// periodic. Displacements are clamped to [−β_max, β_max] with
/// β_max = 2(γ + 1). For coherent frames the starting Re β is drawn near one
/// of {−γ, 0, γ} and Im β near zero: Π(β) couples |a⟩ and |b⟩ only when 2β is
/// close to a + b, so uniform starts in the box mostly land on flat regions.
/// Deterministic for a given seed.
pub fn maximize_svetlichny(target: &SvetlichnyTarget, opts: &MaximizeOptions) -> Result<SvetlichnyMax> {
    target.check()?;
    if opts.n_starts == 0 {
        return Err(Error::InvalidParameter("n_starts must be at least 1".into()));
    }
    let modes = target.uses_modes();
    let beta_max = target.beta_max();
    let anchor = match target {
        SvetlichnyTarget::CoherentFrame(state) => Some(state.gamma()),
        _ => None,
    };
    let clamp = |p: &[f64]| -> Vec<f64> {
        let mut p = p.to_vec();
        if modes {
            for v in &mut p[4..] {
                *v = v.clamp(-beta_max, beta_max);
            }
        }
        p
    };
    let objective = |p: &[f64]| -> f64 {
        let settings = SvetlichnySettings::from_params(&clamp(p), modes).expect("12 parameters");
        match evaluate(target, &settings) {
            Ok(s) => -s.re.abs(),
            Err(_) => f64::INFINITY,
        }
    };
    let sample = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let mut p = Vec::with_capacity(12);
        for k in 0..6 {
            if k >= 2 && modes {
                match anchor {
                    Some(g) => {
                        let centre = [-g, 0.0, g][rng.gen_range(0..3)];
                        p.push((centre + rng.gen_range(-0.5..=0.5)).clamp(-beta_max, beta_max));
                        p.push(rng.gen_range(-0.5..=0.5));
                    }
                    None => {
                        p.push(rng.gen_range(-beta_max..=beta_max));
                        p.push(rng.gen_range(-beta_max..=beta_max));
                    }
                }
            } else {
                p.push(rng.gen_range(0.0..=PI));
                p.push(rng.gen_range(0.0..=TAU));
            }
        }
        p
    };
    let mut steps = [0.4; 12];
    for k in 0..6 {
        if k >= 2 && modes {
            let step = if anchor.is_some() { 0.25 } else { 0.25 * beta_max };
            steps[2 * k] = step;
            steps[2 * k + 1] = step;
        } else {
            steps[2 * k + 1] = 0.8;
        }
    }
    let nm = NelderMeadOptions {
        ftol: opts.tol,
        max_evals: opts.max_evals,
        max_restarts: 4,
    };
    let run = multistart(opts.n_starts, opts.seed, sample, |x0| {
        nelder_mead(objective, x0, &steps, &nm)
    });
    let settings = SvetlichnySettings::from_params(&clamp(&run.best.x), modes)?;
    let value = svetlichny_value(target, &settings)?.abs();
    Ok(SvetlichnyMax {
        value,
        settings,
        start_index: run.start_index,
        evaluations: run.total_evals,
    })
}
