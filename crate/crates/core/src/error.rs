use thiserror::Error;

/// Errors raised by state construction, channels and observables.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: max |m_ij - conj(m_ji)| = {max_asymmetry:.3e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystem(String),

    #[error("outcome unreachable: probability {probability:.3e}")]
    OutcomeUnreachable { probability: f64 },

    #[error(
        "Fock truncation too small for amplitude {alpha}: tail mass {tail:.3e} at n_max={n_max}, \
         need n_max >= {required}"
    )]
    TruncationTooSmall {
        alpha: f64,
        n_max: usize,
        tail: f64,
        required: usize,
    },

    #[error("displacement |beta| = {beta} exceeds the truncation validity bound {bound}")]
    DisplacementOutOfRange { beta: f64, bound: f64 },

    #[error("integrator step control violated: dt*gamma = {0} > 0.01")]
    StepControl(f64),

    #[error("integrator trace drift {0:.3e} exceeds 1e-6")]
    TraceDrift(f64),

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
