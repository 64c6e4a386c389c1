//! Desk-scale simulation of block-encoding algorithms for free-fermion
//! correlation matrices.
//!
//! The crate builds sparse-oracle Hamiltonians, certified Chebyshev
//! approximations of matrix functions, explicit block-encodings with error
//! budgets, Hadamard-test estimators, a locality-based classical baseline
//! and the clock-Hamiltonian construction. Every quantum pipeline can be
//! compared against exact eigendecomposition at small sizes.

pub mod baseline;
pub mod block_encoding;
pub mod chebyshev;
pub mod clock;
pub mod correlation;
pub mod error;
pub mod estimator;
pub mod experiment;
pub mod linalg;
pub mod oracle;

pub use error::{Error, Result};
