//! Dense complex linear algebra over labeled subsystems.
//!
//! Subsystem dimensions are always carried explicitly next to the matrix so
//! that hybrid qubit/mode/mode states are never ambiguous.

mod eigen;
mod matrix;
mod state;

pub use eigen::{eig_hermitian, eigvals_hermitian, HermitianEigen};
pub use matrix::{kron, ComplexMatrix};
pub use state::{DensityOperator, Ket};

pub type C64 = num_complex::Complex64;

/// Product of subsystem dimensions.
pub fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Embeds a single-subsystem operator into the full space as I ⊗ op ⊗ I.
pub fn embed(op: &ComplexMatrix, subsystem: usize, dims: &[usize]) -> ComplexMatrix {
    assert_eq!(op.rows(), dims[subsystem]);
    let left = total_dim(&dims[..subsystem]);
    let right = total_dim(&dims[subsystem + 1..]);
    kron(
        &kron(&ComplexMatrix::identity(left), op),
        &ComplexMatrix::identity(right),
    )
}
