//! Fixtures shared by the benchmarks.

use ctsim_core::{
    ms_state_vsp, CoherentFrameState, DampingParams, DensityOperator, MsParams, SvetlichnyTarget,
};

/// Damped VSP state at a representative point of the figure grids.
pub fn damped_vsp(theta: f64, r: f64) -> DensityOperator {
    let params = MsParams::new(theta).expect("theta in range");
    ctsim_core::damp_vsp(
        &ms_state_vsp(params).to_density(),
        DampingParams::new(r).expect("r in range"),
    )
    .expect("qubit dims")
}

pub fn coherent_target(theta: f64, alpha: f64, r: f64) -> SvetlichnyTarget {
    let state = CoherentFrameState::ms_state(MsParams::new(theta).expect("theta in range"), alpha)
        .expect("nonnegative amplitude")
        .damp(DampingParams::new(r).expect("r in range"));
    SvetlichnyTarget::CoherentFrame(state)
}
