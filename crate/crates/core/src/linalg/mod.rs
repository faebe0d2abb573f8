//! Dense complex linear algebra: matrices, normalized states, seeded
//! randomness and the Hermitian eigensolver everything else builds on.

mod eigen;
mod matrix;
pub mod rng;
mod state;

pub use eigen::{
    degeneracy_tolerance, hermitian_eigendecomposition, hermitian_eigenvalues, EigenDecomposition,
    DEGENERACY_RELATIVE, HERMITIAN_TOLERANCE,
};
pub use matrix::ComplexMatrix;
pub use state::{StateVector, NORM_TOLERANCE};
