//! Maximal-slice states in the vacuum/single-photon and coherent encodings.
//!
//! Subsystem 0 is always the controller's stationary two-level system.
//! Subsystems 1 and 2 are the optical modes sent to Alice and Bob: two-level
//! in the VSP encoding, truncated Fock spaces carrying |±α⟩ in the coherent one.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use crate::hilbert::{Ket, C64};
use crate::{Error, Result};

/// Upper bound on the probability mass a truncated coherent state may drop.
pub const TAIL_BOUND: f64 = 1e-12;

/// Physical qubit encoding of the optical modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Encoding {
    /// Vacuum and single-photon Fock states.
    Vsp,
    /// Opposite-phase coherent states |α⟩, |−α⟩.
    Coherent,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Vsp => "vsp",
            Encoding::Coherent => "coherent",
        })
    }
}

impl FromStr for Encoding {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vsp" => Ok(Encoding::Vsp),
            "coherent" => Ok(Encoding::Coherent),
            other => Err(Error::InvalidParameter(format!("unknown encoding '{other}'"))),
        }
    }
}

/// Angle θ of the maximal-slice state, c = cos θ, d = sin θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsParams {
    theta: f64,
}

impl MsParams {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2 + 1e-12).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "theta = {theta} outside [0, pi/2]"
            )));
        }
        Ok(Self {
            theta: theta.min(FRAC_PI_2),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn c(&self) -> f64 {
        self.theta.cos()
    }

    pub fn d(&self) -> f64 {
        self.theta.sin()
    }
}

/// Coherent-state amplitude together with the Fock truncation that holds it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentEncoding {
    alpha: f64,
    n_max: usize,
}

impl CoherentEncoding {
    /// Uses the shared truncation policy.
    pub fn new(alpha: f64) -> Result<Self> {
        check_amplitude(alpha)?;
        Ok(Self {
            alpha,
            n_max: truncation_for(alpha),
        })
    }

    pub fn with_truncation(alpha: f64, n_max: usize) -> Result<Self> {
        check_amplitude(alpha)?;
        check_tail(alpha, n_max)?;
        Ok(Self { alpha, n_max })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }
}

fn check_amplitude(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "coherent amplitude {alpha} must be a nonnegative real"
        )));
    }
    Ok(())
}

fn check_tail(alpha: f64, n_max: usize) -> Result<()> {
    let tail = tail_mass(alpha, n_max);
    if tail >= TAIL_BOUND {
        return Err(Error::TruncationTooSmall {
            alpha,
            n_max,
            tail,
            required: truncation_for(alpha),
        });
    }
    Ok(())
}

/// Poisson mass of |α⟩ on Fock states n ≥ n_max.
pub fn tail_mass(alpha: f64, n_max: usize) -> f64 {
    let a2 = alpha * alpha;
    if a2 == 0.0 {
        return if n_max == 0 { 1.0 } else { 0.0 };
    }
    let ln_fact: f64 = (2..=n_max).map(|k| (k as f64).ln()).sum();
    let mut term = (-a2 + n_max as f64 * a2.ln() - ln_fact).exp();
    let mut sum: f64 = 0.0;
    let mut n = n_max;
    while term > 1e-30 * sum.max(1e-300) || n < n_max + 2 {
        sum += term;
        n += 1;
        term *= a2 / n as f64;
        if n > n_max + 10_000 {
            break;
        }
    }
    sum
}

/// Fock truncation used everywhere: ceil(α² + 6α + 12), grown until the
/// tail mass drops below [`TAIL_BOUND`].
pub fn truncation_for(alpha: f64) -> usize {
    let mut n = (alpha * alpha + 6.0 * alpha + 12.0).ceil() as usize;
    while tail_mass(alpha, n) >= TAIL_BOUND {
        n += 1;
    }
    n
}

/// Truncated coherent state |α⟩ for a real (possibly negative) amplitude,
/// renormalized after truncation.
pub fn coherent_ket(alpha: f64, n_max: usize) -> Result<Ket> {
    if !alpha.is_finite() || n_max == 0 {
        return Err(Error::InvalidParameter(format!(
            "coherent_ket(alpha={alpha}, n_max={n_max})"
        )));
    }
    check_tail(alpha.abs(), n_max)?;
    Ket::normalized(vec![n_max], coherent_amplitudes(alpha, n_max))
}

/// e^{−α²/2} αⁿ/√n! for n < n_max, not renormalized.
fn coherent_amplitudes(alpha: f64, n_max: usize) -> Vec<C64> {
    let mut amps = Vec::with_capacity(n_max);
    let mut a = (-0.5 * alpha * alpha).exp();
    for n in 0..n_max {
        if n > 0 {
            a *= alpha / (n as f64).sqrt();
        }
        amps.push(C64::new(a, 0.0));
    }
    amps
}

/// (|000⟩ + c|111⟩ + d|011⟩)/√2 over dims (2,2,2).
pub fn ms_state_vsp(params: MsParams) -> Ket {
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    amps[0b000] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[0b111] = C64::new(params.c() * FRAC_1_SQRT_2, 0.0);
    amps[0b011] = C64::new(params.d() * FRAC_1_SQRT_2, 0.0);
    Ket::normalized(vec![2, 2, 2], amps).expect("unit norm by construction")
}

/// Squared norm of (|0,α,α⟩ + c|1,−α,−α⟩ + d|0,−α,−α⟩)/√2 before renormalization.
pub fn ms_coherent_norm_squared(params: MsParams, alpha: f64) -> f64 {
    1.0 + params.d() * (-4.0 * alpha * alpha).exp()
}

/// N(α)(|0⟩|α,α⟩ + c|1⟩|−α,−α⟩ + d|0⟩|−α,−α⟩) over dims (2, n_max, n_max),
/// with N(α) = 1/√(2 + 2 sinθ e^{−4α²}).
pub fn ms_state_coherent(params: MsParams, enc: CoherentEncoding) -> Result<Ket> {
    let n = enc.n_max();
    let plus = coherent_ket(enc.alpha(), n)?;
    let minus = coherent_ket(-enc.alpha(), n)?;
    let pp = plus.tensor(&plus);
    let mm = minus.tensor(&minus);
    let norm = 1.0 / (2.0 * ms_coherent_norm_squared(params, enc.alpha())).sqrt();
    let mut amps = Vec::with_capacity(2 * n * n);
    // Charlie |0⟩ block, then |1⟩ block
    amps.extend(
        pp.amplitudes()
            .iter()
            .zip(mm.amplitudes())
            .map(|(a, b)| (a + b * params.d()) * norm),
    );
    amps.extend(mm.amplitudes().iter().map(|b| b * params.c() * norm));
    // the truncated kets carry a ~1e-12 norm defect; renormalize it away
    Ket::normalized(vec![2, n, n], amps)
}

/// Controller measurement basis (ξ⁺, ξ⁻) ∝ ((1±d)|0⟩ ± c|1⟩).
///
/// Written through φ = π/4 − θ/2 so that ξ⁻ stays well defined at θ = π/2,
/// where it tends to −|1⟩.
pub fn charlie_basis(params: MsParams) -> (Ket, Ket) {
    let phi = FRAC_PI_4 - 0.5 * params.theta();
    let (s, c) = phi.sin_cos();
    let xi_plus = Ket::normalized(vec![2], vec![C64::new(c, 0.0), C64::new(s, 0.0)]);
    let xi_minus = Ket::normalized(vec![2], vec![C64::new(s, 0.0), C64::new(-c, 0.0)]);
    (
        xi_plus.expect("unit vector"),
        xi_minus.expect("unit vector"),
    )
}

/// Even and odd cat states |γ±⟩ ∝ |γ⟩ ± |−γ⟩ in a truncated Fock space.
#[derive(Debug, Clone)]
pub struct CatBasis {
    pub gamma: f64,
    pub n_max: usize,
    pub even_ket: Ket,
    pub odd_ket: Ket,
}

impl CatBasis {
    /// ⟨γ|−γ⟩ = e^{−2γ²}
    pub fn gram_overlap(&self) -> f64 {
        (-2.0 * self.gamma * self.gamma).exp()
    }
}

/// Cats are built from the even/odd Fock components directly, which avoids
/// the cancellation in |γ⟩ − |−γ⟩ at small γ. Below γ = 1e-4 the Fock limits
/// |0⟩ and |1⟩ are used.
pub fn cat_basis(gamma: f64, n_max: usize) -> Result<CatBasis> {
    check_amplitude(gamma)?;
    if n_max < 2 {
        return Err(Error::InvalidParameter(format!(
            "cat basis needs n_max >= 2, got {n_max}"
        )));
    }
    check_tail(gamma, n_max)?;
    let (even_ket, odd_ket) = if gamma < 1e-4 {
        (
            Ket::basis(vec![n_max], 0)?,
            Ket::basis(vec![n_max], 1)?,
        )
    } else {
        let amps = coherent_amplitudes(gamma, n_max);
        let zero = C64::new(0.0, 0.0);
        let even: Vec<C64> = amps
            .iter()
            .enumerate()
            .map(|(n, &a)| if n % 2 == 0 { a } else { zero })
            .collect();
        let odd: Vec<C64> = amps
            .iter()
            .enumerate()
            .map(|(n, &a)| if n % 2 == 1 { a } else { zero })
            .collect();
        (
            Ket::normalized(vec![n_max], even)?,
            Ket::normalized(vec![n_max], odd)?,
        )
    };
    Ok(CatBasis {
        gamma,
        n_max,
        even_ket,
        odd_ket,
    })
}

/// Three-tangle of a pure three-qubit state as the Coffman-Kundu-Wootters
/// residual C²₀₍₁₂₎ − C²₀₁ − C²₀₂.
///
/// Both two-qubit reductions of a pure three-qubit state have rank ≤ 2, so
/// each concurrence follows from the 2×2 matrix τ_kl = w_kᵀ(σ_y⊗σ_y)w_l over
/// the unnormalized decomposition vectors: C² = ‖τ‖²_F − 2|det τ|. No square
/// roots of near-zero eigenvalues are taken.
pub fn tangle(state: &Ket) -> Result<f64> {
    if state.dims() != [2, 2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "tangle needs dims [2, 2, 2], got {:?}",
            state.dims()
        )));
    }
    let rho = state.to_density();
    let rho0 = rho.partial_trace(&[0])?;
    let m = rho0.matrix();
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    let one_vs_rest = 4.0 * det;

    let a = state.amplitudes();
    let amp = |i: usize, j: usize, k: usize| a[(i << 2) | (j << 1) | k];
    // reduction onto (0,1): decomposition over qubit 2's basis
    let w01: [[C64; 4]; 2] = std::array::from_fn(|k| {
        std::array::from_fn(|ij| amp(ij >> 1, ij & 1, k))
    });
    // reduction onto (0,2): decomposition over qubit 1's basis
    let w02: [[C64; 4]; 2] = std::array::from_fn(|j| {
        std::array::from_fn(|ik| amp(ik >> 1, j, ik & 1))
    });
    Ok(one_vs_rest - rank2_concurrence_sqr(&w01) - rank2_concurrence_sqr(&w02))
}

fn rank2_concurrence_sqr(w: &[[C64; 4]; 2]) -> f64 {
    // σ_y ⊗ σ_y in the computational basis: anti-diagonal (-1, 1, 1, -1)
    let flip = |v: &[C64; 4]| [-v[3], v[2], v[1], -v[0]];
    let tau: [[C64; 2]; 2] = std::array::from_fn(|k| {
        std::array::from_fn(|l| {
            let f = flip(&w[l]);
            w[k].iter().zip(&f).map(|(x, y)| x * y).sum()
        })
    });
    let frob: f64 = tau.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = (tau[0][0] * tau[1][1] - tau[0][1] * tau[1][0]).norm();
    (frob - 2.0 * det).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    /// Cayley hyperdeterminant, an independent route to the three-tangle.
    fn hyperdeterminant_tangle(psi: &Ket) -> f64 {
        let a = psi.amplitudes();
        let x = |s: &str| a[usize::from_str_radix(s, 2).unwrap()];
        let d1 = x("000").powi(2) * x("111").powi(2)
            + x("001").powi(2) * x("110").powi(2)
            + x("010").powi(2) * x("101").powi(2)
            + x("100").powi(2) * x("011").powi(2);
        let d2 = x("000") * x("111") * x("011") * x("100")
            + x("000") * x("111") * x("101") * x("010")
            + x("000") * x("111") * x("110") * x("001")
            + x("011") * x("100") * x("101") * x("010")
            + x("011") * x("100") * x("110") * x("001")
            + x("101") * x("010") * x("110") * x("001");
        let d3 = x("000") * x("110") * x("101") * x("011") + x("111") * x("001") * x("010") * x("100");
        4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm()
    }

    #[test]
    fn vacuum_at_zero_amplitude() {
        let k = coherent_ket(0.0, 12).unwrap();
        approx(k.amplitudes()[0].re, 1.0, 1e-15);
    }

    #[test]
    fn coherent_overlaps_match_gaussian() {
        let p = coherent_ket(1.0, 20).unwrap();
        let m = coherent_ket(-1.0, 20).unwrap();
        approx(p.inner(&p).re, 1.0, 1e-10);
        approx(m.inner(&p).re, (-2.0_f64).exp(), 1e-10);
    }

    #[test]
    fn mean_photon_number_is_poisson_mean() {
        let alpha = 2.5;
        let n = truncation_for(alpha);
        let k = coherent_ket(alpha, n).unwrap();
        let mean: f64 = k
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| i as f64 * a.norm_sqr())
            .sum();
        approx(mean, 6.25, 1e-8);
    }

    #[test]
    fn truncation_error_names_required_size() {
        match coherent_ket(2.5, 10) {
            Err(Error::TruncationTooSmall { required, .. }) => {
                assert_eq!(required, truncation_for(2.5))
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn policy_meets_tail_bound() {
        for &alpha in &[0.0, 0.2, 0.5, 1.25, 2.5, 4.0] {
            let n = truncation_for(alpha);
            assert!(tail_mass(alpha, n) < TAIL_BOUND);
            assert!(n >= (alpha * alpha + 6.0 * alpha + 12.0).ceil() as usize);
        }
    }

    #[test]
    fn ms_vsp_limits() {
        let ghz = ms_state_vsp(MsParams::new(0.0).unwrap());
        approx(ghz.amplitudes()[0].re, FRAC_1_SQRT_2, 1e-15);
        approx(ghz.amplitudes()[7].re, FRAC_1_SQRT_2, 1e-15);
        let bell = ms_state_vsp(MsParams::new(FRAC_PI_2).unwrap());
        approx(bell.amplitudes()[3].re, FRAC_1_SQRT_2, 1e-15);
        approx(bell.amplitudes()[7].norm(), 0.0, 1e-15);
    }

    #[test]
    fn tangle_anchors() {
        let t = |theta: f64| tangle(&ms_state_vsp(MsParams::new(theta).unwrap())).unwrap();
        approx(t(0.0), 1.0, 1e-12);
        approx(t(FRAC_PI_2), 0.0, 1e-12);
        approx(t(FRAC_PI_4), 0.5, 1e-12);
    }

    #[test]
    fn tangle_matches_hyperdeterminant_on_generic_states() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let amps: Vec<C64> = (0..8)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let psi = Ket::normalized(vec![2, 2, 2], amps).unwrap();
            approx(tangle(&psi).unwrap(), hyperdeterminant_tangle(&psi), 1e-10);
        }
    }

    #[test]
    fn tangle_rejects_non_qubits() {
        let k = Ket::basis(vec![2, 3], 0).unwrap();
        assert!(tangle(&k).is_err());
    }

    #[test]
    fn charlie_basis_limits() {
        let (p, m) = charlie_basis(MsParams::new(0.0).unwrap());
        approx(p.amplitudes()[0].re, FRAC_1_SQRT_2, 1e-15);
        approx(p.amplitudes()[1].re, FRAC_1_SQRT_2, 1e-15);
        approx(m.amplitudes()[0].re, FRAC_1_SQRT_2, 1e-15);
        approx(m.amplitudes()[1].re, -FRAC_1_SQRT_2, 1e-15);

        let (p, m) = charlie_basis(MsParams::new(FRAC_PI_2).unwrap());
        approx(p.amplitudes()[0].re, 1.0, 1e-15);
        approx(m.amplitudes()[1].re, -1.0, 1e-15);
        approx(m.amplitudes()[0].re, 0.0, 1e-15);
    }

    #[test]
    fn charlie_basis_matches_unstable_form_away_from_degeneracy() {
        for &theta in &[0.0, FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, 1.5] {
            let params = MsParams::new(theta).unwrap();
            let (c, d) = (params.c(), params.d());
            let (p, m) = charlie_basis(params);
            let np = ((1.0 + d).powi(2) + c * c).sqrt();
            let nm = ((1.0 - d).powi(2) + c * c).sqrt();
            approx(p.amplitudes()[0].re, (1.0 + d) / np, 1e-14);
            approx(p.amplitudes()[1].re, c / np, 1e-14);
            approx(m.amplitudes()[0].re, (1.0 - d) / nm, 1e-12);
            approx(m.amplitudes()[1].re, -c / nm, 1e-12);
            approx(p.inner(&m).norm(), 0.0, 1e-12);
        }
    }

    #[test]
    fn charlie_basis_completeness() {
        use crate::hilbert::ComplexMatrix;
        for k in 0..=20 {
            let (p, m) = charlie_basis(MsParams::new(FRAC_PI_2 * k as f64 / 20.0).unwrap());
            let sum = &ComplexMatrix::outer(p.amplitudes(), p.amplitudes())
                + &ComplexMatrix::outer(m.amplitudes(), m.amplitudes());
            assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        }
    }

    #[test]
    fn cat_basis_small_amplitude_limit() {
        let cb = cat_basis(0.0, 12).unwrap();
        approx(cb.even_ket.amplitudes()[0].re, 1.0, 1e-15);
        approx(cb.odd_ket.amplitudes()[1].re, 1.0, 1e-15);
    }

    #[test]
    fn cat_basis_orthonormal_and_gram() {
        let gamma = 1.0;
        let n = truncation_for(gamma);
        let cb = cat_basis(gamma, n).unwrap();
        approx(cb.even_ket.inner(&cb.odd_ket).norm(), 0.0, 1e-12);
        let plus = coherent_ket(gamma, n).unwrap();
        let minus = coherent_ket(-gamma, n).unwrap();
        approx(plus.inner(&minus).re, cb.gram_overlap(), 1e-10);
    }

    #[test]
    fn even_cat_photon_number() {
        // Fock-sum oracle: even terms of the Poisson distribution
        let gamma: f64 = 0.5;
        let n = truncation_for(gamma);
        let cb = cat_basis(gamma, n).unwrap();
        let mean: f64 = cb
            .even_ket
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(k, a)| k as f64 * a.norm_sqr())
            .sum();
        let g2 = gamma * gamma;
        approx(mean, g2 * g2.tanh(), 1e-12);
        approx(mean, 0.0612, 1e-3);
    }

    #[test]
    fn coherent_ms_normalization() {
        let params = MsParams::new(FRAC_PI_2).unwrap();
        approx(ms_coherent_norm_squared(params, 0.5), 1.0 + (-1.0_f64).exp(), 1e-15);
        for &theta in &[0.0, FRAC_PI_6, FRAC_PI_4, FRAC_PI_2] {
            for &alpha in &[0.2, 0.5, 1.25] {
                let params = MsParams::new(theta).unwrap();
                let enc = CoherentEncoding::new(alpha).unwrap();
                let psi = ms_state_coherent(params, enc).unwrap();
                approx(psi.inner(&psi).re, 1.0, 1e-10);
            }
        }
    }

    #[test]
    fn coherent_ms_large_amplitude_approaches_vsp_pattern() {
        let params = MsParams::new(FRAC_PI_4).unwrap();
        let enc = CoherentEncoding::new(2.5).unwrap();
        let psi = ms_state_coherent(params, enc).unwrap();
        let n = enc.n_max();
        let plus = coherent_ket(2.5, n).unwrap();
        let minus = coherent_ket(-2.5, n).unwrap();
        let zero = Ket::basis(vec![2], 0).unwrap();
        let one = Ket::basis(vec![2], 1).unwrap();
        let t1 = zero.tensor(&plus).tensor(&plus);
        let t2 = one.tensor(&minus).tensor(&minus);
        let t3 = zero.tensor(&minus).tensor(&minus);
        let pattern: Vec<C64> = (0..t1.dim())
            .map(|i| {
                (t1.amplitudes()[i]
                    + t2.amplitudes()[i] * params.c()
                    + t3.amplitudes()[i] * params.d())
                    * FRAC_1_SQRT_2
            })
            .collect();
        let pattern = Ket::normalized(vec![2, n, n], pattern).unwrap();
        assert!(pattern.inner(&psi).norm_sqr() >= 1.0 - 1e-8);
    }

    #[test]
    fn ghz_coherent_norm_factor() {
        let params = MsParams::new(0.0).unwrap();
        for &alpha in &[0.0, 0.2, 2.5] {
            approx(
                1.0 / (2.0 * ms_coherent_norm_squared(params, alpha)).sqrt(),
                FRAC_1_SQRT_2,
                1e-15,
            );
        }
    }

    #[test]
    fn encoding_parses() {
        assert_eq!("VSP".parse::<Encoding>().unwrap(), Encoding::Vsp);
        assert_eq!("coherent".parse::<Encoding>().unwrap(), Encoding::Coherent);
        assert!("dual-rail".parse::<Encoding>().is_err());
    }
}
