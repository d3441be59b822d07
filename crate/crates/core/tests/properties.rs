use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, SQRT_2};

use ctsim_core::*;
use proptest::prelude::*;

fn mixed_state(dims: Vec<usize>, raw: &[f64], weights: &[f64]) -> DensityOperator {
    let n: usize = dims.iter().product();
    let mut m = ComplexMatrix::zeros(n, n);
    for (k, w) in weights.iter().enumerate() {
        let amps: Vec<C64> = (0..n)
            .map(|i| C64::new(raw[2 * (k * n + i)], raw[2 * (k * n + i) + 1]))
            .collect();
        let ket = Ket::normalized(dims.clone(), amps).unwrap();
        m = &m + &ket.to_density().matrix().scale_real(w.abs() + 1e-3);
    }
    DensityOperator::from_unnormalized(dims, m).unwrap()
}

fn three_qubit_state() -> impl Strategy<Value = DensityOperator> {
    (prop::collection::vec(-1.0..1.0f64, 48), prop::collection::vec(0.0..1.0f64, 3))
        .prop_map(|(raw, w)| mixed_state(vec![2, 2, 2], &raw, &w))
}

fn two_qubit_state() -> impl Strategy<Value = DensityOperator> {
    (prop::collection::vec(-1.0..1.0f64, 32), prop::collection::vec(0.0..1.0f64, 4))
        .prop_map(|(raw, w)| mixed_state(vec![2, 2], &raw, &w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn damping_keeps_states_physical(rho in three_qubit_state(), r in 0.0..=1.0f64) {
        let out = damp_vsp(&rho, DampingParams::new(r).unwrap()).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-12);
        prop_assert!(out.min_eigenvalue().unwrap() > -1e-10);
    }

    #[test]
    fn damping_composes(rho in three_qubit_state(), r1 in 0.0..=1.0f64, r2 in 0.0..=1.0f64) {
        let p1 = DampingParams::new(r1).unwrap();
        let p2 = DampingParams::new(r2).unwrap();
        let twice = damp_vsp(&damp_vsp(&rho, p1).unwrap(), p2).unwrap();
        let once = damp_vsp(&rho, p1.then(&p2)).unwrap();
        prop_assert!(twice.matrix().max_abs_diff(once.matrix()) < 1e-10);
    }

    #[test]
    fn coherent_damping_composes(theta in 0.0..=FRAC_PI_2, alpha in 0.0..2.5f64, r1 in 0.0..=1.0f64, r2 in 0.0..=1.0f64) {
        let p1 = DampingParams::new(r1).unwrap();
        let p2 = DampingParams::new(r2).unwrap();
        let s = CoherentFrameState::ms_state(MsParams::new(theta).unwrap(), alpha).unwrap();
        let twice = s.damp(p1).damp(p2).to_cat_basis().unwrap();
        let once = s.damp(p1.then(&p2)).to_cat_basis().unwrap();
        prop_assert!(twice.matrix().max_abs_diff(once.matrix()) < 1e-10);
    }

    #[test]
    fn controller_outcomes_are_complete(rho in three_qubit_state(), theta in 0.0..FRAC_PI_2) {
        let (plus, minus) = charlie_basis(MsParams::new(theta).unwrap());
        let prob = |k: &Ket| match rho.project(0, k) {
            Ok((_, p)) => p,
            Err(Error::OutcomeUnreachable { probability }) => probability,
            Err(e) => panic!("{e}"),
        };
        prop_assert!((prob(&plus) + prob(&minus) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn projection_commutes_with_tracing(rho in three_qubit_state(), theta in 0.0..FRAC_PI_2) {
        let (plus, _) = charlie_basis(MsParams::new(theta).unwrap());
        let (post, p) = rho.project(0, &plus).unwrap();
        let (post_reduced, q) = rho.partial_trace(&[0, 1]).unwrap().project(0, &plus).unwrap();
        prop_assert!((p - q).abs() < 1e-10);
        let alice = post.partial_trace(&[0]).unwrap();
        prop_assert!(alice.matrix().max_abs_diff(post_reduced.matrix()) < 1e-10);
    }

    #[test]
    fn fef_matches_brute_force(rho in two_qubit_state()) {
        let f = fully_entangled_fraction(&rho, &MagicBasis::standard()).unwrap();
        let oracle = fef_oracle(&rho).unwrap();
        prop_assert!((f - oracle).abs() < 1e-6, "{} vs {}", f, oracle);
        prop_assert!((0.0..=1.0 + 1e-10).contains(&f));
    }

    #[test]
    fn svetlichny_never_exceeds_quantum_bound(rho in three_qubit_state(), params in prop::collection::vec(0.0..6.3f64, 12)) {
        let settings = SvetlichnySettings::from_params(&params, false).unwrap();
        let s = svetlichny_value(&SvetlichnyTarget::Qubits(rho), &settings).unwrap();
        prop_assert!(s.abs() <= 4.0 * SQRT_2 + 1e-6);
    }

    #[test]
    fn coherent_state_is_normalized(theta in 0.0..=FRAC_PI_2, alpha in 0.0..2.6f64) {
        let enc = CoherentEncoding::new(alpha).unwrap();
        let ket = ms_state_coherent(MsParams::new(theta).unwrap(), enc).unwrap();
        prop_assert!((ket.inner(&ket).re - 1.0).abs() < 1e-10);
    }
}

#[test]
fn tangle_follows_cos_squared() {
    for k in 0..=40 {
        let theta = FRAC_PI_2 * k as f64 / 40.0;
        let t = tangle(&ms_state_vsp(MsParams::new(theta).unwrap())).unwrap();
        assert!((t - theta.cos().powi(2)).abs() < 1e-8);
    }
}

#[test]
fn controller_projection_gives_bell_states() {
    for k in 0..=10 {
        let params = MsParams::new(FRAC_PI_2 * k as f64 / 10.0).unwrap();
        let rho = ms_state_vsp(params).to_density();
        let (plus, minus) = charlie_basis(params);
        let magic = MagicBasis::standard();
        let (post, p) = rho.project(0, &plus).unwrap();
        assert!((p - (1.0 + params.d()) / 2.0).abs() < 1e-12);
        assert!((magic.kets()[0].expectation_in(&post) - 1.0).abs() < 1e-10);
        if k < 10 {
            let (post, p) = rho.project(0, &minus).unwrap();
            assert!((p - (1.0 - params.d()) / 2.0).abs() < 1e-12);
            // |Φ⁻⟩ = −i m₂
            assert!((magic.kets()[1].expectation_in(&post) - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn vsp_pipeline_matches_closed_form_grid() {
    for i in 0..50 {
        for j in 0..50 {
            let params = MsParams::new(FRAC_PI_2 * i as f64 / 49.0).unwrap();
            let p = DampingParams::new(j as f64 / 49.0).unwrap();
            let fig = ct_pipeline_vsp(params, p).unwrap();
            let (f_nc, f_c) = closed_form_vsp(params, p);
            assert!((fig.f_nc - f_nc).abs() < 1e-9, "θ index {i}, r index {j}");
            assert!((fig.f_c - f_c).abs() < 1e-9, "θ index {i}, r index {j}");
        }
    }
}

/// F_c = 1 − (2/3)r² + (1/3)r⁴ decreases on the whole interval: 3/4 at
/// r = 1/√2 (where the quartic term bottoms out) and 2/3 at r = 1.
#[test]
fn vsp_conditioned_fidelity_shape() {
    let ms = MsParams::new(0.4).unwrap();
    let mut previous = f64::INFINITY;
    for j in 0..=1000 {
        let r = j as f64 / 1000.0;
        let f_c = ct_pipeline_vsp(ms, DampingParams::new(r).unwrap()).unwrap().f_c;
        assert!(f_c <= previous + 1e-12);
        previous = f_c;
    }
    let at_half = ct_pipeline_vsp(ms, DampingParams::new(FRAC_1_SQRT_2).unwrap()).unwrap();
    assert!((at_half.f_c - 0.75).abs() < 1e-9);
    let full = ct_pipeline_vsp(MsParams::new(0.0).unwrap(), DampingParams::new(1.0).unwrap()).unwrap();
    assert!((full.f_c - 2.0 / 3.0).abs() < 1e-9);
    assert!((full.f_nc - 2.0 / 3.0).abs() < 1e-9);
    assert!((previous - 2.0 / 3.0).abs() < 1e-9);
}

#[test]
fn vsp_outcome_probabilities_are_loss_independent() {
    for &theta in &[0.0, 0.5, 1.2] {
        let params = MsParams::new(theta).unwrap();
        let fig = ct_pipeline_vsp(params, DampingParams::new(0.6).unwrap()).unwrap();
        assert!((fig.outcomes[0].probability - (1.0 + params.d()) / 2.0).abs() < 1e-10);
        assert!((fig.outcomes[1].probability - (1.0 - params.d()) / 2.0).abs() < 1e-10);
    }
}

#[test]
fn coherent_outcome_probabilities() {
    for &theta in &[0.0, FRAC_PI_4, 1.3] {
        for &alpha in &[0.2, 0.5, 1.25] {
            let params = MsParams::new(theta).unwrap();
            let fig = ct_pipeline_coherent(
                params,
                CoherentEncoding::new(alpha).unwrap(),
                DampingParams::new(0.5).unwrap(),
            )
            .unwrap();
            let e = (-4.0 * alpha * alpha).exp();
            let d = params.d();
            let plus = (1.0 + d) * (1.0 + e) / (2.0 * (1.0 + d * e));
            assert!((fig.outcomes[0].probability - plus).abs() < 1e-10);
            assert!((fig.outcomes[1].probability - (1.0 - plus)).abs() < 1e-10);
        }
    }
}

/// ρ_nc = N²[|γγ⟩⟨γγ| + |−γ−γ⟩⟨−γ−γ| + e^{−4r²α²} sinθ (|γγ⟩⟨−γ−γ| + h.c.)]
#[test]
fn coherent_reduced_state_matches_dyad_expansion() {
    for &(theta, alpha, r) in &[(0.3, 0.5, 0.4), (1.0, 1.25, 0.7), (FRAC_PI_2, 0.2, 0.1)] {
        let params = MsParams::new(theta).unwrap();
        let enc = CoherentEncoding::new(alpha).unwrap();
        let p = DampingParams::new(r).unwrap();
        let rho = evolve_ms_coherent(params, enc, p).unwrap();
        let reduced = rho.partial_trace(&[1, 2]).unwrap();

        let n = enc.n_max();
        let gamma = alpha * p.tau();
        let plus = coherent_ket(gamma, n).unwrap();
        let minus = coherent_ket(-gamma, n).unwrap();
        let pp = plus.tensor(&plus);
        let mm = minus.tensor(&minus);
        let norm2 = 1.0 / (2.0 + 2.0 * params.d() * (-4.0 * alpha * alpha).exp());
        let cross = (-4.0 * r * r * alpha * alpha).exp() * params.d();
        let outer = |a: &Ket, b: &Ket| ComplexMatrix::outer(a.amplitudes(), b.amplitudes());
        let expected = (&(&outer(&pp, &pp) + &outer(&mm, &mm))
            + &(&outer(&pp, &mm) + &outer(&mm, &pp)).scale_real(cross))
            .scale_real(norm2);
        assert!(reduced.matrix().max_abs_diff(&expected) < 1e-9);
    }
}

#[test]
fn coherent_evolution_limits() {
    let params = MsParams::new(0.8).unwrap();
    let enc = CoherentEncoding::new(0.5).unwrap();
    let start = evolve_ms_coherent(params, enc, DampingParams::new(0.0).unwrap()).unwrap();
    let pure = ms_state_coherent(params, enc).unwrap().to_density();
    assert!(start.matrix().max_abs_diff(pure.matrix()) < 1e-12);

    let end = evolve_ms_coherent(params, enc, DampingParams::new(1.0).unwrap()).unwrap();
    let ab = end.partial_trace(&[1, 2]).unwrap();
    assert!((ab.matrix()[(0, 0)].re - 1.0).abs() < 1e-9);
}

/// The cat-coordinate pipeline agrees with the state materialized in Fock
/// space and measured against the cat magic basis there.
#[test]
fn coherent_fidelity_matches_fock_space_evaluation() {
    for &(theta, alpha, r) in &[(0.0, 0.5, 0.3), (FRAC_PI_4, 1.25, 0.6), (1.2, 0.2, 0.1)] {
        let params = MsParams::new(theta).unwrap();
        let enc = CoherentEncoding::new(alpha).unwrap();
        let p = DampingParams::new(r).unwrap();
        let fig = ct_pipeline_coherent(params, enc, p).unwrap();

        let rho = evolve_ms_coherent(params, enc, p).unwrap();
        let magic = CatMagicBasis::new(alpha * p.tau(), enc.n_max()).unwrap();
        let f_nc = teleport_fidelity(
            fully_entangled_fraction(&rho.partial_trace(&[1, 2]).unwrap(), magic.basis()).unwrap(),
        );
        assert!((fig.f_nc - f_nc).abs() < 1e-9);

        let (plus, _) = charlie_basis(params);
        let (post, prob) = rho.project(0, &plus).unwrap();
        let f_plus = teleport_fidelity(fully_entangled_fraction(&post, magic.basis()).unwrap());
        assert!((fig.outcomes[0].probability - prob).abs() < 1e-10);
        assert!((fig.outcomes[0].fidelity.unwrap() - f_plus).abs() < 1e-9);
    }
}

#[test]
fn coherent_conditioned_curves_cross() {
    let ms = MsParams::new(0.0).unwrap();
    let small = CoherentEncoding::new(0.5).unwrap();
    let large = CoherentEncoding::new(2.5).unwrap();
    let mut signs = Vec::new();
    for j in 1..100 {
        let p = DampingParams::new(j as f64 / 100.0).unwrap();
        let diff = ct_pipeline_coherent(ms, small, p).unwrap().f_c
            - ct_pipeline_coherent(ms, large, p).unwrap().f_c;
        signs.push(diff.signum());
    }
    assert!(signs.windows(2).any(|w| w[0] != w[1]));
}

#[test]
fn control_power_flat_for_ghz() {
    let ms = MsParams::new(0.0).unwrap();
    for j in 0..=100 {
        let p = DampingParams::new(j as f64 / 100.0).unwrap();
        assert!((ct_pipeline_vsp(ms, p).unwrap().c_p - 1.0).abs() < 1e-9);
        for &alpha in &[0.2, 0.5, 1.25, 2.5] {
            let fig = ct_pipeline_coherent(ms, CoherentEncoding::new(alpha).unwrap(), p).unwrap();
            assert!((fig.c_p - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn vsp_damping_matches_master_equation() {
    for i in 0..5 {
        for j in 0..5 {
            let params = MsParams::new(FRAC_PI_2 * i as f64 / 4.0).unwrap();
            let p = DampingParams::new(0.95 * j as f64 / 4.0).unwrap();
            let rho = ms_state_vsp(params).to_density();
            let cfg = LindbladConfig::for_damping(p, vec![1, 2]).unwrap();
            let numeric = lindblad_integrate(&rho, &cfg).unwrap();
            let analytic = damp_vsp(&rho, p).unwrap();
            assert!(numeric.trace_distance(&analytic).unwrap() <= 1e-6);
        }
    }
}

#[test]
fn coherent_damping_matches_master_equation_spot() {
    let params = MsParams::new(FRAC_PI_4).unwrap();
    let enc = CoherentEncoding::new(0.5).unwrap();
    let p = DampingParams::new(0.7).unwrap();
    let rho0 = ms_state_coherent(params, enc).unwrap().to_density();
    let cfg = LindbladConfig::for_damping(p, vec![1, 2]).unwrap();
    let numeric = lindblad_integrate(&rho0, &cfg).unwrap();
    let analytic = evolve_ms_coherent(params, enc, p).unwrap();
    assert!(numeric.trace_distance(&analytic).unwrap() <= 1e-5);
}

#[test]
fn figure_grid_states_are_physical() {
    for &theta in &[0.0, FRAC_PI_4, FRAC_PI_2] {
        for &alpha in &[0.2, 0.5] {
            for &r in &[0.0, 0.5, 1.0] {
                let rho = evolve_ms_coherent(
                    MsParams::new(theta).unwrap(),
                    CoherentEncoding::new(alpha).unwrap(),
                    DampingParams::new(r).unwrap(),
                )
                .unwrap();
                rho.validate().unwrap();
            }
        }
    }
}
