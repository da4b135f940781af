//! Complex linear algebra, pure-state simulation, density-matrix utilities and
//! Pauli-basis shot sampling.
//!
//! Qubit ordering convention, shared by every module in the crate: qubit 0 is
//! the most significant bit of a basis-state label, so `|q0 q1 … q(n-1)⟩` has
//! index `Σ q_i · 2^(n-1-i)`.

mod density;
mod linalg;
mod pauli;
pub mod rng;
mod state;

use thiserror::Error;

pub use density::{partial_trace, purity, relative_fidelity, trace_distance, DensityMatrix};
pub use linalg::*;
pub use pauli::{
    exact_pauli_distribution, sample_from_distribution, sample_pauli, Axis, Outcome, PauliBasis, PauliDistribution,
};
pub use state::{apply_unitary, StateVec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcoreError {
    #[error("matrix is not unitary within {MATRIX_TOL}")]
    NonUnitary,
    #[error("matrix is not Hermitian within {MATRIX_TOL}")]
    NonHermitian,
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },
    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("partial trace keep-set is empty")]
    EmptyKeepSet,
    #[error("density matrix trace is {0}, expected 1")]
    NotNormalized(f64),
    #[error("state has zero purity")]
    ZeroPurity,
    #[error("state vector is not normalized (norm² = {0})")]
    NotNormalizedState(f64),
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
}
