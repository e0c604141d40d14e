//! Dense complex linear algebra over qubit registers.

mod covariance;
mod eigen;
mod matrix;
mod state;
pub mod state_file;

pub use covariance::{covariance_witness, CovarianceWitness};
pub use eigen::{hermitian_eigenvalues, is_psd, symmetric_eigenvalues, RealMatrix};
pub use matrix::{anticommutator, commutator, tensor_product, ComplexMatrix, MAX_DIM};
pub use state::{ghz_state, QuantumState, StateKind};
