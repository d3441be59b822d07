//! Oracle-equivalence checks behind `ctsim verify`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use ctsim_core::nonlocality::displaced_parity_coherent_element;
use ctsim_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Random mixed state of the given dims with `rank` pure components.
pub fn random_state(rng: &mut ChaCha8Rng, dims: Vec<usize>, rank: usize) -> Result<DensityOperator> {
    let n: usize = dims.iter().product();
    let mut m = ComplexMatrix::zeros(n, n);
    for _ in 0..rank {
        let amps: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let ket = Ket::normalized(dims.clone(), amps)?;
        m = &m + &ket.to_density().matrix().scale_real(rng.gen_range(0.05..1.0));
    }
    DensityOperator::from_unnormalized(dims, m)
}

fn check(name: &'static str, tol: f64, run: impl FnOnce() -> Result<f64>) -> CheckOutcome {
    match run() {
        Ok(err) => CheckOutcome {
            name,
            passed: err <= tol,
            detail: format!("max deviation {err:.3e} (tolerance {tol:.0e})"),
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn closed_form_grid() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        for j in 0..50 {
            let params = MsParams::new(FRAC_PI_2 * i as f64 / 49.0)?;
            let p = DampingParams::new(j as f64 / 49.0)?;
            let fig = ct_pipeline_vsp(params, p)?;
            let (f_nc, f_c) = closed_form_vsp(params, p);
            worst = worst.max((fig.f_nc - f_nc).abs()).max((fig.f_c - f_c).abs());
        }
    }
    Ok(worst)
}

fn fef_against_oracle() -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let magic = MagicBasis::standard();
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let rho = random_state(&mut rng, vec![2, 2], 1 + k % 4)?;
        worst = worst.max((fully_entangled_fraction(&rho, &magic)? - fef_oracle(&rho)?).abs());
    }
    Ok(worst)
}

fn vsp_channel_oracle() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let params = MsParams::new(FRAC_PI_2 * i as f64 / 4.0)?;
            let p = DampingParams::new(0.95 * j as f64 / 4.0)?;
            let rho = ms_state_vsp(params).to_density();
            let numeric = lindblad_integrate(&rho, &LindbladConfig::for_damping(p, vec![1, 2])?)?;
            worst = worst.max(numeric.trace_distance(&damp_vsp(&rho, p)?)?);
        }
    }
    Ok(worst)
}

fn coherent_channel_oracle() -> Result<f64> {
    let params = MsParams::new(FRAC_PI_4)?;
    let enc = CoherentEncoding::new(0.5)?;
    let p = DampingParams::new(0.7)?;
    let rho0 = ms_state_coherent(params, enc)?.to_density();
    let numeric = lindblad_integrate(&rho0, &LindbladConfig::for_damping(p, vec![1, 2])?)?;
    numeric.trace_distance(&evolve_ms_coherent(params, enc, p)?)
}

fn tangle_law() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let theta = FRAC_PI_2 * k as f64 / 19.0;
        worst = worst.max((tangle(&ms_state_vsp(MsParams::new(theta)?))? - theta.cos().powi(2)).abs());
    }
    Ok(worst)
}

fn parity_closed_form() -> Result<f64> {
    let n = 60;
    let mut worst: f64 = 0.0;
    for &beta in &[C64::new(0.5, 0.0), C64::new(0.7, -0.9), C64::new(-1.2, 0.4)] {
        let pi = displaced_parity(ModeSetting { beta }, n)?;
        for &(a, b) in &[(1.0, 1.0), (1.0, -1.0), (-0.6, 0.6)] {
            let ka = coherent_ket(a, n)?;
            let image = pi.matvec(coherent_ket(b, n)?.amplitudes());
            let fock: C64 = ka
                .amplitudes()
                .iter()
                .zip(&image)
                .map(|(x, y)| x.conj() * y)
                .sum();
            worst = worst.max((fock - displaced_parity_coherent_element(a, b, beta)).norm());
        }
    }
    Ok(worst)
}

fn ghz_svetlichny() -> Result<f64> {
    let target = SvetlichnyTarget::Qubits(ms_state_vsp(MsParams::new(0.0)?).to_density());
    let best = maximize_svetlichny(&target, &MaximizeOptions::default())?;
    Ok((best.value - 4.0 * SQRT_2).abs())
}

/// Runs every suite; each outcome carries its worst deviation.
pub fn run_verify() -> Vec<CheckOutcome> {
    vec![
        check("VSP pipeline = closed form (50x50 grid)", 1e-9, closed_form_grid),
        check("fully entangled fraction = brute-force oracle (50 states)", 1e-6, fef_against_oracle),
        check("VSP damping = Lindblad RK4 (5x5 grid)", 1e-6, vsp_channel_oracle),
        check("coherent damping = Lindblad RK4 (spot check)", 1e-5, coherent_channel_oracle),
        check("tangle = cos²θ (20 angles)", 1e-8, tangle_law),
        check("displaced parity: Fock expm = closed form", 1e-9, parity_closed_form),
        check("GHZ max |S_v| = 4√2", 1e-4, ghz_svetlichny),
    ]
}
