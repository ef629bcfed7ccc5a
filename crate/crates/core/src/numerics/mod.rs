//! Dense Hermitian kernels shared by every Gram-based check.

mod eigen;
mod hermitian;
mod kron;
mod rng;

pub use eigen::{eigen_bounds, hermitian_eigen, EigenBounds, EigenDecomposition, MAX_SWEEPS, RESIDUAL_LIMIT};
pub use hermitian::HermitianMatrix;
pub use kron::{kron_product, kron_residual};
pub use rng::{seeded_rng, SeededRng};
