//! Toeplitz and Hankel decompositions of square complex matrices.
//!
//! Two routes are provided:
//!
//! - [`ge`]: an O(n³) Gaussian-elimination construction that writes a generic
//!   `A` as `T₁T₂P₁ T₃T₄P₂ ⋯ T₂ₙ₋₁T₂ₙPₙ` (2n Toeplitz factors, n permutations),
//!   with a Hankel variant obtained through the exchange matrix.
//! - [`minimal`]: the ⌊n/2⌋+1 factor route, solving `A = T₁⋯T_r` with a damped
//!   Gauss–Newton iteration on the Toeplitz product map, together with the
//!   Jacobian rank certificate, the explicit 2×2 solution and the Segre
//!   linear-quadratic system export.
//!
//! [`guards`] contains the membership tests that rule out products of
//! symmetric Toeplitz, persymmetric Hankel and circulant factors, and
//! [`io`] / [`cli`] carry the text formats and the command-line driver.

pub mod cli;
pub mod error;
pub mod ge;
pub mod gen;
pub mod guards;
pub mod io;
pub mod minimal;
pub mod structmat;

pub use error::{Error, Result};
pub use structmat::{
    apply_chain, apply_operator, dense_product, hankel_from_toeplitz, shift_basis, toeplitz_matvec,
    ut_toeplitz_inverse, DenseMatrix, Factor, FactorChain, HankelSpec, Operator, PermutationSpec,
    Scalar, Side, ToeplitzSpec, DEFAULT_TOLERANCE,
};
