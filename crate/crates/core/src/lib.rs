//! Controlled teleportation of single-rail optical qubits through lossy fibers.
//!
//! A controller (Charlie, subsystem 0) shares a maximal-slice state with two
//! users (Alice, subsystem 1; Bob, subsystem 2). The two optical modes sent to
//! the users suffer amplitude damping; this crate evaluates how the damping
//! affects the conditioned and non-conditioned teleportation fidelities, the
//! control power, the protocol efficiency, and the genuine tripartite
//! nonlocality measured by the Svetlichny function.
//!
//! Two encodings are supported: vacuum/single-photon ([`Encoding::Vsp`]) and
//! opposite-phase coherent states ([`Encoding::Coherent`]).
//!
//! Module map:
//! - [`hilbert`]: dense complex linear algebra, states, partial trace, projection
//! - [`encodings`]: the maximal-slice state in both encodings, cat bases, tangle
//! - [`channel`]: analytic damping maps and a Lindblad integrator used as oracle
//! - [`teleport`]: fully entangled fraction, fidelities, control power, efficiency
//! - [`nonlocality`]: Svetlichny observables, evaluation and maximization
//! - [`optimize`]: multi-start Nelder-Mead used by the maximizers

pub mod channel;
pub mod encodings;
mod error;
pub mod hilbert;
pub mod nonlocality;
pub mod optimize;
pub mod teleport;

pub use channel::{
    damp_coherent_pair, damp_vsp, evolve_ms_coherent, lindblad_integrate, CoherentFrameState,
    DampingParams, LindbladConfig,
};
pub use encodings::{
    cat_basis, charlie_basis, coherent_ket, ms_state_coherent, ms_state_vsp, tangle, CatBasis,
    CoherentEncoding, Encoding, MsParams,
};
pub use error::{Error, Result};
pub use hilbert::{eig_hermitian, kron, ComplexMatrix, DensityOperator, HermitianEigen, Ket, C64};
pub use nonlocality::{
    displaced_parity, maximize_svetlichny, rotated_sigma_z, svetlichny_value, MaximizeOptions,
    ModeSetting, PartySetting, QubitSetting, SvetlichnyMax, SvetlichnySettings, SvetlichnyTarget,
};
pub use teleport::{
    closed_form_vsp, control_power, ct_pipeline_coherent, ct_pipeline_vsp, efficiency,
    fef_oracle, fully_entangled_fraction, teleport_fidelity, CatMagicBasis, CtFigures,
    MagicBasis,
};

/// Tolerance for state invariants (Hermiticity, unit trace, normalization).
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance for eigen-decomposition residuals.
pub const EIGEN_TOL: f64 = 1e-8;
/// Negative eigenvalues above this threshold are treated as numerical noise.
pub const PSD_TOL: f64 = 1e-9;
/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 20_170_707;
