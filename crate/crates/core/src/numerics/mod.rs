//! Dense symmetric linear algebra and deterministic normal draws.

mod cholesky;
mod eigen;
mod matrix;
mod rng;

pub use cholesky::{cholesky_factor, spd_solve, CholeskyFactor};
pub use eigen::symmetric_eigenvalues;
pub use matrix::SymmetricMatrix;
pub use rng::{normal_draw, SeededStream};
