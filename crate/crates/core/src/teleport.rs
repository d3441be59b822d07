//! Teleportation figures of merit.
//!
//! The fully entangled fraction f of a two-qubit state is the largest
//! eigenvalue of Re⟨mⱼ|ρ|mₖ⟩ in a magic basis: maximally entangled states are
//! exactly the real combinations of magic-basis vectors (up to a global
//! phase), so maximizing ⟨φ|ρ|φ⟩ reduces to a real symmetric eigenproblem.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::Rng;

use crate::channel::{damp_vsp, CoherentFrameState, DampingParams};
use crate::encodings::{cat_basis, charlie_basis, ms_state_vsp, CoherentEncoding, MsParams};
use crate::hilbert::{eigvals_hermitian, ComplexMatrix, DensityOperator, Ket, C64};
use crate::optimize::{multistart, nelder_mead, NelderMeadOptions};
use crate::{Error, Result};

const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;

/// Four orthonormal maximally entangled kets with the phases
/// (Φ⁺, iΦ⁻, iΨ⁺, Ψ⁻) over a chosen local basis.
#[derive(Debug, Clone)]
pub struct MagicBasis {
    kets: [Ket; 4],
}

impl MagicBasis {
    /// Magic basis over the computational qubit basis.
    pub fn standard() -> Self {
        let zero = Ket::basis(vec![2], 0).expect("qubit basis");
        let one = Ket::basis(vec![2], 1).expect("qubit basis");
        Self::over_local_basis(&zero, &one).expect("orthonormal qubit basis")
    }

    /// Magic basis with |0⟩, |1⟩ replaced by any orthonormal pair of one mode.
    pub fn over_local_basis(zero: &Ket, one: &Ket) -> Result<Self> {
        if zero.dims() != one.dims() || zero.dims().len() != 1 {
            return Err(Error::DimensionMismatch(
                "local basis kets must be single-subsystem kets of equal dimension".into(),
            ));
        }
        if zero.inner(one).norm() > 1e-10 {
            return Err(Error::InvalidState("local basis kets are not orthogonal".into()));
        }
        let pair = |a: &Ket, b: &Ket, c: &Ket, d: &Ket, sign: f64, phase: C64| -> Result<Ket> {
            let ab = a.tensor(b);
            let cd = c.tensor(d);
            let amps = ab
                .amplitudes()
                .iter()
                .zip(cd.amplitudes())
                .map(|(x, y)| (x + y * sign) * phase * FRAC_1_SQRT_2)
                .collect();
            Ket::normalized(ab.dims().to_vec(), amps)
        };
        let (one_c, i_c) = (C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        Ok(Self {
            kets: [
                pair(zero, zero, one, one, 1.0, one_c)?,
                pair(zero, zero, one, one, -1.0, i_c)?,
                pair(zero, one, one, zero, 1.0, i_c)?,
                pair(zero, one, one, zero, -1.0, one_c)?,
            ],
        })
    }

    pub fn kets(&self) -> &[Ket; 4] {
        &self.kets
    }

    pub fn dims(&self) -> &[usize] {
        self.kets[0].dims()
    }

    /// M_jk = ⟨m_j|ρ|m_k⟩.
    pub fn coordinates(&self, rho: &DensityOperator) -> Result<ComplexMatrix> {
        if rho.dims() != self.dims() {
            return Err(Error::DimensionMismatch(format!(
                "state dims {:?} do not match basis dims {:?}",
                rho.dims(),
                self.dims()
            )));
        }
        let images: Vec<Vec<C64>> = self
            .kets
            .iter()
            .map(|k| rho.matrix().matvec(k.amplitudes()))
            .collect();
        let mut m = ComplexMatrix::zeros(4, 4);
        for j in 0..4 {
            for k in 0..4 {
                m[(j, k)] = self.kets[j]
                    .amplitudes()
                    .iter()
                    .zip(&images[k])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
            }
        }
        Ok(m)
    }
}

/// Magic basis built from even and odd cat states of amplitude γ.
#[derive(Debug, Clone)]
pub struct CatMagicBasis {
    gamma: f64,
    basis: MagicBasis,
}

impl CatMagicBasis {
    pub fn new(gamma: f64, n_max: usize) -> Result<Self> {
        let cats = cat_basis(gamma, n_max)?;
        Ok(Self {
            gamma,
            basis: MagicBasis::over_local_basis(&cats.even_ket, &cats.odd_ket)?,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn basis(&self) -> &MagicBasis {
        &self.basis
    }
}

/// Largest eigenvalue of the real part of ρ written in `basis`.
pub fn fully_entangled_fraction(rho: &DensityOperator, basis: &MagicBasis) -> Result<f64> {
    let m = basis.coordinates(rho)?.real_part();
    let values = eigvals_hermitian(&m)?;
    Ok(values[3])
}

/// Brute-force fully entangled fraction: maximizes ⟨φ|ρ|φ⟩ over
/// |φ⟩ = (U⊗V)|Φ⁺⟩ with U, V ∈ SU(2) in Z-Y-Z Euler angles.
pub fn fef_oracle(rho: &DensityOperator) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "oracle needs a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    let m = rho.matrix();
    let overlap = |x: &[f64]| -> f64 {
        let u = su2(x[0], x[1], x[2]);
        let v = su2(x[3], x[4], x[5]);
        // (U⊗V)|Φ⁺⟩ has amplitudes (U_{i0}V_{j0} + U_{i1}V_{j1})/√2
        let mut phi = [C64::new(0.0, 0.0); 4];
        for i in 0..2 {
            for j in 0..2 {
                phi[2 * i + j] = (u[i][0] * v[j][0] + u[i][1] * v[j][1]) * FRAC_1_SQRT_2;
            }
        }
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..4 {
            for b in 0..4 {
                acc += phi[a].conj() * m[(a, b)] * phi[b];
            }
        }
        -acc.re
    };
    let opts = NelderMeadOptions {
        ftol: 1e-13,
        max_evals: 20_000,
        max_restarts: 6,
    };
    let result = multistart(
        12,
        crate::DEFAULT_SEED,
        |rng| (0..6).map(|k| rng.gen_range(0.0..if k % 3 == 1 { PI } else { 2.0 * PI })).collect(),
        |x0| nelder_mead(overlap, x0, &[0.4; 6], &opts),
    );
    Ok(-result.best.value)
}

fn su2(a: f64, b: f64, c: f64) -> [[C64; 2]; 2] {
    let (cb, sb) = ((0.5 * b).cos(), (0.5 * b).sin());
    let e = |t: f64| C64::from_polar(1.0, t);
    [
        [e(-0.5 * (a + c)) * cb, -e(-0.5 * (a - c)) * sb],
        [e(0.5 * (a - c)) * sb, e(0.5 * (a + c)) * cb],
    ]
}

/// F = (2f + 1)/3.
pub fn teleport_fidelity(f: f64) -> f64 {
    (2.0 * f + 1.0) / 3.0
}

/// 1 − 3(F_nc − 2/3) above the classical bound, 1 otherwise.
pub fn control_power(f_nc: f64) -> f64 {
    if f_nc <= CLASSICAL_FIDELITY {
        1.0
    } else {
        (1.0 - 3.0 * (f_nc - CLASSICAL_FIDELITY)).clamp(0.0, 1.0)
    }
}

/// C_p[1 + 3(F_c − 1)] above the classical bound, 0 otherwise.
pub fn efficiency(c_p: f64, f_c: f64) -> f64 {
    if f_c <= CLASSICAL_FIDELITY {
        0.0
    } else {
        (c_p * (1.0 + 3.0 * (f_c - 1.0))).clamp(0.0, 1.0)
    }
}

/// One of the controller's two measurement outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerOutcome {
    pub probability: f64,
    /// `None` when the outcome cannot occur.
    pub fidelity: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtFigures {
    pub f_c: f64,
    pub f_nc: f64,
    pub c_p: f64,
    pub eta: f64,
    /// Outcomes for ξ⁺ and ξ⁻, in that order.
    pub outcomes: [ControllerOutcome; 2],
}

/// Figures for a (controller, Alice, Bob) state whose modes are written in
/// an orthonormal qubit basis.
fn figures_from_state(rho: &DensityOperator, params: MsParams) -> Result<CtFigures> {
    let magic = MagicBasis::standard();
    let f_nc = teleport_fidelity(fully_entangled_fraction(&rho.partial_trace(&[1, 2])?, &magic)?);
    let (plus, minus) = charlie_basis(params);
    let mut outcomes = [ControllerOutcome {
        probability: 0.0,
        fidelity: None,
    }; 2];
    for (slot, xi) in outcomes.iter_mut().zip([&plus, &minus]) {
        *slot = match rho.project(0, xi) {
            Ok((post, prob)) => ControllerOutcome {
                probability: prob,
                fidelity: Some(teleport_fidelity(fully_entangled_fraction(&post, &magic)?)),
            },
            Err(Error::OutcomeUnreachable { probability }) => ControllerOutcome {
                probability,
                fidelity: None,
            },
            Err(e) => return Err(e),
        };
    }
    let f_c = outcomes
        .iter()
        .map(|o| o.probability * o.fidelity.unwrap_or(0.0))
        .sum();
    let c_p = control_power(f_nc);
    Ok(CtFigures {
        f_c,
        f_nc,
        c_p,
        eta: efficiency(c_p, f_c),
        outcomes,
    })
}

/// Damps the VSP maximal-slice state and evaluates all figures numerically.
pub fn ct_pipeline_vsp(params: MsParams, p: DampingParams) -> Result<CtFigures> {
    let rho = damp_vsp(&ms_state_vsp(params).to_density(), p)?;
    figures_from_state(&rho, params)
}

/// Closed forms (F_nc, F_c) for the VSP encoding:
/// F_nc = (3 + 2 sinθ |r² − 1| + |1 − 2r² + 2r⁴|)/6, F_c the same with sinθ → 1.
pub fn closed_form_vsp(params: MsParams, p: DampingParams) -> (f64, f64) {
    let r2 = p.r() * p.r();
    let quartic = (1.0 - 2.0 * r2 + 2.0 * r2 * r2).abs();
    let linear = 2.0 * (r2 - 1.0).abs();
    (
        (3.0 + params.d() * linear + quartic) / 6.0,
        (3.0 + linear + quartic) / 6.0,
    )
}

/// Coherent-encoding figures. The damped state never leaves the span of
/// |±γ⟩ per mode, so it is evaluated exactly in the orthonormal cat basis,
/// independent of the Fock truncation.
pub fn ct_pipeline_coherent(
    params: MsParams,
    enc: CoherentEncoding,
    p: DampingParams,
) -> Result<CtFigures> {
    let rho = CoherentFrameState::ms_state(params, enc.alpha())?
        .damp(p)
        .to_cat_basis()?;
    figures_from_state(&rho, params)
}
