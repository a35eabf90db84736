//! The `⌊n/2⌋ + 1` factor route: the product map and its Jacobian, the rank
//! certificate, a damped Gauss–Newton solver for Toeplitz and Hankel factors,
//! the explicit 2×2 solution and the bilinear (Segre) equation system.

mod closed_form;
mod segre;
mod solver;
mod tuple;

pub use closed_form::{closed_form_2x2, ClosedForm2Params};
pub use segre::{
    build_linear_quadratic_system, export_system, parse_export, rank_one_point, ExportSummary,
    LinearQuadraticSystem,
};
pub use solver::{
    gauss_newton_decompose, gauss_newton_hankel_decompose, GaussNewtonConfig, HankelSolution,
    SolveStats, ToeplitzSolution,
};
pub use tuple::{
    certificate_point, compose_hankel, compose_rho, dimension_is_sharp, jacobian_hankel,
    jacobian_rho, minimal_factor_count, numerical_rank, rank_certificate, FactorKind,
    JacobianMatrix, RankReport, ToeplitzTuple,
};
