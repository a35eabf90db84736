//! Structured matrix types, the transpose/rotate/swap/flip operators, the
//! shift basis and fast Toeplitz products.

mod chain;
mod dense;
mod fft;
mod hankel;
mod operators;
mod permutation;
mod toeplitz;

pub use chain::{dense_product, Factor, FactorChain};
pub use dense::{DenseMatrix, Scalar};
pub use fft::toeplitz_matvec;
pub use hankel::{hankel_deviation, HankelSpec};
pub use operators::{apply_chain, apply_operator, hankel_from_toeplitz, Operator, Side};
pub use permutation::PermutationSpec;
pub use toeplitz::{shift_basis, toeplitz_deviation, ut_toeplitz_inverse, ToeplitzSpec};

/// Default relative Frobenius tolerance for approximate comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
