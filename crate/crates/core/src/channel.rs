//! Amplitude damping of the two optical modes.
//!
//! The analytic maps are the production path. [`lindblad_integrate`] solves
//! the master equation
//! dρ/dt = Γ Σᵢ (aᵢ ρ aᵢ† − ½{aᵢ†aᵢ, ρ}) directly in truncated Fock space and
//! is used to cross-check them.

use crate::encodings::{coherent_ket, CoherentEncoding, MsParams};
use crate::hilbert::{embed, total_dim, ComplexMatrix, DensityOperator, Ket, C64};
use crate::{Error, Result};

/// Normalized loss coordinate r ∈ [0, 1] with τ = √(1 − r²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingParams {
    r: f64,
    tau: f64,
}

impl DampingParams {
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!("r = {r} outside [0, 1]")));
        }
        Ok(Self {
            r,
            tau: ((1.0 - r) * (1.0 + r)).sqrt(),
        })
    }

    /// τ = e^{−Γt/2}, r = √(1 − e^{−Γt}).
    pub fn from_rate_time(gamma_rate: f64, t: f64) -> Result<Self> {
        if gamma_rate < 0.0 || t < 0.0 || !(gamma_rate * t).is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rate {gamma_rate} and time {t} must be finite and nonnegative"
            )));
        }
        let gt = gamma_rate * t;
        Ok(Self {
            r: (-(-gt).exp_m1()).sqrt(),
            tau: (-0.5 * gt).exp(),
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Time at which a fiber with rate Γ reaches this r; infinite at r = 1.
    pub fn time(&self, gamma_rate: f64) -> f64 {
        -2.0 * self.tau.ln() / gamma_rate
    }

    /// Damping by `self` followed by `other` (τ² multiplies).
    pub fn then(&self, other: &DampingParams) -> DampingParams {
        let tau = self.tau * other.tau;
        DampingParams {
            r: ((1.0 - tau) * (1.0 + tau)).sqrt(),
            tau,
        }
    }
}

/// Kraus operators of the single-mode damping channel on span{|0⟩, |1⟩}.
fn qubit_damping_kraus(p: DampingParams) -> [ComplexMatrix; 2] {
    let k0 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, p.tau]).expect("2x2");
    let k1 = ComplexMatrix::from_real(2, 2, &[0.0, p.r, 0.0, 0.0]).expect("2x2");
    [k0, k1]
}

fn apply_local_channel(
    rho: &ComplexMatrix,
    subsystem: usize,
    dims: &[usize],
    kraus: &[ComplexMatrix],
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
    for k in kraus {
        let full = embed(k, subsystem, dims);
        out = &out + &full.matmul(rho).matmul(&full.adjoint());
    }
    out
}

/// Damps subsystems 1 and 2 of a VSP-encoded (2,2,2) state:
/// |1̄⟩⟨1̄| → τ²|1̄⟩⟨1̄| + r²|0̄⟩⟨0̄|, |1̄⟩⟨0̄| → τ|1̄⟩⟨0̄|, |0̄⟩⟨0̄| fixed.
pub fn damp_vsp(rho: &DensityOperator, p: DampingParams) -> Result<DensityOperator> {
    if rho.dims() != [2, 2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "damp_vsp needs dims [2, 2, 2], got {:?}",
            rho.dims()
        )));
    }
    let kraus = qubit_damping_kraus(p);
    let mut m = rho.matrix().clone();
    for mode in [1, 2] {
        m = apply_local_channel(&m, mode, rho.dims(), &kraus);
    }
    m.symmetrize();
    DensityOperator::new(rho.dims().to_vec(), m)
}

/// Damping of one coherent dyad |ket⟩⟨bra| with real amplitudes:
/// |a⟩⟨b| → ⟨b|a⟩^{r²} |τa⟩⟨τb|. Returns (τ·bra, τ·ket, coherence factor).
///
/// For |a| = |b| = α the factor is 1 on same-sign dyads and e^{−2r²α²} on
/// opposite-sign ones.
pub fn damp_coherent_pair(bra_amp: f64, ket_amp: f64, p: DampingParams) -> (f64, f64, f64) {
    let diff = ket_amp - bra_amp;
    let factor = (-0.5 * p.r * p.r * diff * diff).exp();
    (bra_amp * p.tau, ket_amp * p.tau, factor)
}

/// Controller qubit ⊗ two coherent modes, written over the nonorthogonal frame
/// |c⟩|s₁γ⟩|s₂γ⟩ with c ∈ {0,1} and s ∈ {+,−}.
///
/// Frame index is `4c + 2s₁ + s₂` with s = 0 for +γ and 1 for −γ. The state is
/// ρ = Σᵢⱼ Cᵢⱼ |fᵢ⟩⟨fⱼ|; damping only rescales C and shrinks γ, so the whole
/// evolution stays in this 8-dimensional frame.
#[derive(Debug, Clone)]
pub struct CoherentFrameState {
    gamma: f64,
    coeffs: ComplexMatrix,
}

pub(crate) fn frame_sign(s: usize) -> f64 {
    if s == 0 {
        1.0
    } else {
        -1.0
    }
}

impl CoherentFrameState {
    /// Undamped maximal-slice state N(α)(|0,α,α⟩ + c|1,−α,−α⟩ + d|0,−α,−α⟩).
    pub fn ms_state(params: MsParams, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "coherent amplitude {alpha} must be a nonnegative real"
            )));
        }
        let n = 1.0 / (2.0 + 2.0 * params.d() * (-4.0 * alpha * alpha).exp()).sqrt();
        let mut v = vec![C64::new(0.0, 0.0); 8];
        v[0b000] = C64::new(n, 0.0);
        v[0b111] = C64::new(n * params.c(), 0.0);
        v[0b011] = C64::new(n * params.d(), 0.0);
        Ok(Self {
            gamma: alpha,
            coeffs: ComplexMatrix::outer(&v, &v),
        })
    }

    pub fn from_parts(gamma: f64, coeffs: ComplexMatrix) -> Result<Self> {
        if coeffs.rows() != 8 || coeffs.cols() != 8 {
            return Err(Error::DimensionMismatch("frame coefficients must be 8x8".into()));
        }
        Ok(Self { gamma, coeffs })
    }

    /// Current coherent amplitude γ of the modes.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn coeffs(&self) -> &ComplexMatrix {
        &self.coeffs
    }

    /// Damps both modes; each opposite-sign mode dyad picks up e^{−2r²γ²}.
    pub fn damp(&self, p: DampingParams) -> Self {
        let mut coeffs = self.coeffs.clone();
        for i in 0..8 {
            for j in 0..8 {
                let mut factor = 1.0;
                for shift in [1, 0] {
                    let ket = frame_sign((i >> shift) & 1) * self.gamma;
                    let bra = frame_sign((j >> shift) & 1) * self.gamma;
                    factor *= damp_coherent_pair(bra, ket, p).2;
                }
                coeffs[(i, j)] *= factor;
            }
        }
        Self {
            gamma: self.gamma * p.tau(),
            coeffs,
        }
    }

    /// Gram matrix ⟨fᵢ|fⱼ⟩ of the frame.
    pub fn gram(&self) -> ComplexMatrix {
        let g = (-2.0 * self.gamma * self.gamma).exp();
        let mode = |a: usize, b: usize| if a == b { 1.0 } else { g };
        let mut out = ComplexMatrix::zeros(8, 8);
        for i in 0..8 {
            for j in 0..8 {
                if i >> 2 == j >> 2 {
                    out[(i, j)] = C64::new(mode((i >> 1) & 1, (j >> 1) & 1) * mode(i & 1, j & 1), 0.0);
                }
            }
        }
        out
    }

    /// Tr ρ = Σᵢⱼ Cᵢⱼ ⟨fⱼ|fᵢ⟩.
    pub fn trace(&self) -> f64 {
        self.coeffs.trace_product(&self.gram()).re
    }

    /// Single-mode change of frame: column s holds the coordinates of |±γ⟩ in
    /// the orthonormal cat basis (|γ⁺⟩, |γ⁻⟩).
    pub fn cat_coordinates(gamma: f64) -> ComplexMatrix {
        let x = 2.0 * gamma * gamma;
        let even = (0.5 * (1.0 + (-x).exp())).sqrt();
        let odd = (-0.5 * (-x).exp_m1()).sqrt();
        ComplexMatrix::from_real(2, 2, &[even, even, odd, -odd]).expect("2x2")
    }

    /// Same state written in the orthonormal basis |c⟩ ⊗ |γ^±⟩ ⊗ |γ^±⟩.
    pub fn to_cat_basis(&self) -> Result<DensityOperator> {
        let t = Self::cat_coordinates(self.gamma);
        let full = crate::hilbert::kron(&crate::hilbert::kron(&ComplexMatrix::identity(2), &t), &t);
        let m = full.matmul(&self.coeffs).matmul(&full.adjoint());
        DensityOperator::from_unnormalized(vec![2, 2, 2], m)
    }

    /// Materializes ρ in the truncated Fock space (2, n_max, n_max).
    pub fn to_fock(&self, n_max: usize) -> Result<DensityOperator> {
        let plus = coherent_ket(self.gamma, n_max)?;
        let minus = coherent_ket(-self.gamma, n_max)?;
        let modes = [&plus, &minus];
        let dim = 2 * n_max * n_max;
        // frame vectors as columns
        let mut frame = ComplexMatrix::zeros(dim, 8);
        for f in 0..8 {
            let charlie = Ket::basis(vec![2], f >> 2)?;
            let v = charlie
                .tensor(modes[(f >> 1) & 1])
                .tensor(modes[f & 1]);
            for (i, a) in v.amplitudes().iter().enumerate() {
                frame[(i, f)] = *a;
            }
        }
        let m = frame.matmul(&self.coeffs).matmul(&frame.adjoint());
        DensityOperator::from_unnormalized(vec![2, n_max, n_max], m)
    }
}

/// Damped coherent-encoded maximal-slice state materialized in Fock space.
pub fn evolve_ms_coherent(
    params: MsParams,
    enc: CoherentEncoding,
    p: DampingParams,
) -> Result<DensityOperator> {
    CoherentFrameState::ms_state(params, enc.alpha())?
        .damp(p)
        .to_fock(enc.n_max())
}

/// Settings of the Runge-Kutta master-equation integrator.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladConfig {
    pub gamma_rate: f64,
    pub t_final: f64,
    pub dt: f64,
    /// Subsystems that carry a damped bosonic mode.
    pub damped: Vec<usize>,
}

impl LindbladConfig {
    /// Γ = 1 and t = −ln(1 − r²), the time at which the analytic maps reach `p`.
    /// Undefined for r = 1.
    pub fn for_damping(p: DampingParams, damped: Vec<usize>) -> Result<Self> {
        if p.r() >= 1.0 {
            return Err(Error::InvalidParameter(
                "r = 1 needs infinite integration time".into(),
            ));
        }
        Ok(Self {
            gamma_rate: 1.0,
            t_final: p.time(1.0),
            dt: 0.01,
            damped,
        })
    }
}

/// Fourth-order Runge-Kutta solution of the damping master equation.
///
/// The state is re-symmetrized after every step. A final trace drift above
/// 1e-6 is reported as an error.
pub fn lindblad_integrate(rho0: &DensityOperator, cfg: &LindbladConfig) -> Result<DensityOperator> {
    if cfg.dt <= 0.0 || cfg.t_final < 0.0 || cfg.gamma_rate < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "integrator needs dt > 0, t >= 0, rate >= 0 (got {cfg:?})"
        )));
    }
    if cfg.dt * cfg.gamma_rate > 0.01 {
        return Err(Error::StepControl(cfg.dt * cfg.gamma_rate));
    }
    if let Some(&bad) = cfg.damped.iter().find(|&&k| k >= rho0.dims().len()) {
        return Err(Error::InvalidSubsystem(format!("damped subsystem {bad} out of range")));
    }
    let steps = (cfg.t_final / cfg.dt).ceil() as usize;
    if steps == 0 || cfg.gamma_rate == 0.0 {
        return Ok(rho0.clone());
    }
    let h = cfg.t_final / steps as f64;
    let generator = Dissipator::new(rho0.dims(), &cfg.damped, cfg.gamma_rate);

    let n = rho0.dim();
    let mut rho = rho0.matrix().clone();
    let mut k1 = vec![C64::new(0.0, 0.0); n * n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    for _ in 0..steps {
        let y = rho.as_slice();
        generator.apply(y, &mut k1);
        axpy_into(&mut tmp, y, &k1, 0.5 * h);
        generator.apply(&tmp, &mut k2);
        axpy_into(&mut tmp, y, &k2, 0.5 * h);
        generator.apply(&tmp, &mut k3);
        axpy_into(&mut tmp, y, &k3, h);
        generator.apply(&tmp, &mut k4);
        let y = rho.as_mut_slice();
        for i in 0..n * n {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        rho.symmetrize();
    }
    let drift = (rho.trace().re - 1.0).abs();
    if drift > 1e-6 {
        return Err(Error::TraceDrift(drift));
    }
    DensityOperator::from_unnormalized(rho0.dims().to_vec(), rho)
}

fn axpy_into(out: &mut [C64], y: &[C64], k: &[C64], h: f64) {
    for ((o, a), b) in out.iter_mut().zip(y).zip(k) {
        *o = a + b * h;
    }
}

/// Matrix-free action of the damping generator on a flattened density matrix.
struct Dissipator {
    n: usize,
    rate: f64,
    /// per damped mode: (stride, dimension)
    modes: Vec<(usize, usize)>,
    /// per damped mode: occupation of each flat index
    occupation: Vec<Vec<usize>>,
}

impl Dissipator {
    fn new(dims: &[usize], damped: &[usize], rate: f64) -> Self {
        let n = total_dim(dims);
        let modes: Vec<(usize, usize)> = damped
            .iter()
            .map(|&k| (total_dim(&dims[k + 1..]), dims[k]))
            .collect();
        let occupation = modes
            .iter()
            .map(|&(stride, d)| (0..n).map(|i| (i / stride) % d).collect())
            .collect();
        Self {
            n,
            rate,
            modes,
            occupation,
        }
    }

    fn apply(&self, rho: &[C64], out: &mut [C64]) {
        let n = self.n;
        out.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
        for (&(stride, d), occ) in self.modes.iter().zip(&self.occupation) {
            for i in 0..n {
                let ni = occ[i];
                let row = &mut out[i * n..(i + 1) * n];
                let src = &rho[i * n..(i + 1) * n];
                for k in 0..n {
                    let nk = occ[k];
                    row[k] -= src[k] * (0.5 * self.rate * (ni + nk) as f64);
                }
                if ni + 1 < d {
                    let up = &rho[(i + stride) * n..(i + stride + 1) * n];
                    let si = ((ni + 1) as f64).sqrt() * self.rate;
                    for k in 0..n - stride {
                        let nk = occ[k];
                        if nk + 1 < d {
                            row[k] += up[k + stride] * (si * ((nk + 1) as f64).sqrt());
                        }
                    }
                }
            }
        }
    }
}
