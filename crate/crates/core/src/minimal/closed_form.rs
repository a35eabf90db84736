//! Every 2×2 matrix `[[a, b], [c, d]]` is a product of two Toeplitz matrices
//! `[[x, y], [z, x]] · [[s, t], [u, s]]`.
//!
//! Matching entries gives `x, y, z` rationally in `s, t, u`, and the
//! remaining condition factors as `(s² − tu)(as − bu + ct − ds) = 0`. On the
//! branch `s² ≠ tu` the parameters only need `as − bu + ct − ds = 0`, which
//! is linear in `t` (or in `u` when `c = 0`).

use rand::Rng;

use super::tuple::ToeplitzTuple;
use crate::error::{Error, Result};
use crate::gen::{complex_normal, rng_from_seed};
use crate::structmat::{DenseMatrix, Scalar, ToeplitzSpec};

const MAX_DRAWS: usize = 8;

/// Parameters of the second factor `[[s, t], [u, s]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedForm2Params {
    pub s: Scalar,
    pub t: Scalar,
    pub u: Scalar,
}

impl ClosedForm2Params {
    /// `(a−d)s³ + cs²t − bs²u − ct²u + btu² + (d−a)stu` for the target.
    pub fn cubic_constraint(&self, a: &DenseMatrix) -> Scalar {
        let (aa, b, c, d) = entries(a);
        let Self { s, t, u } = *self;
        (aa - d) * s * s * s + c * s * s * t - b * s * s * u - c * t * t * u
            + b * t * u * u
            + (d - aa) * s * t * u
    }
}

fn entries(a: &DenseMatrix) -> (Scalar, Scalar, Scalar, Scalar) {
    (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)])
}

fn toeplitz2(diag: Scalar, upper: Scalar, lower: Scalar) -> ToeplitzSpec {
    ToeplitzSpec::new(2, vec![lower, diag, upper]).expect("finite entries")
}

/// Two Toeplitz factors whose product is the 2×2 matrix `a`.
pub fn closed_form_2x2(a: &DenseMatrix, seed: u64) -> Result<ToeplitzTuple> {
    if a.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: a.n(),
        });
    }
    let (aa, b, c, d) = entries(a);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let zero = Scalar::new(0.0, 0.0);
    let one = Scalar::new(1.0, 0.0);
    let tiny = 1e-14 * scale;

    if b.norm() <= tiny && c.norm() <= tiny {
        return ToeplitzTuple::new(vec![toeplitz2(zero, aa, d), toeplitz2(zero, one, one)]);
    }

    let mut rng = rng_from_seed(seed);
    let s = one;
    for _ in 0..MAX_DRAWS {
        let drawn = complex_normal(&mut rng) * (1.0 + rng.random::<f64>());
        let (t, u) = if c.norm() > tiny {
            ((b * drawn - aa + d) / c, drawn)
        } else {
            (drawn, (aa - d) / b)
        };
        if let Some(tuple) = candidate(a, s, t, u) {
            return Ok(tuple);
        }
    }
    Err(Error::DegenerateParameters {
        attempts: MAX_DRAWS,
    })
}

fn candidate(a: &DenseMatrix, s: Scalar, t: Scalar, u: Scalar) -> Option<ToeplitzTuple> {
    let (aa, b, c, _) = entries(a);
    let det = s * s - t * u;
    let scale = 1.0 + t.norm() * u.norm();
    if det.norm() < 1e-6 * scale || !(t.is_finite() && u.is_finite()) {
        return None;
    }
    let x = (aa * s - b * u) / det;
    let y = (b * s - aa * t) / det;
    let z = (c * s * s - c * t * u - aa * s * u + b * u * u) / (det * s);
    let tuple = ToeplitzTuple::new(vec![toeplitz2(x, y, z), toeplitz2(s, t, u)]).ok()?;
    let product = tuple.factors()[0]
        .densify()
        .matmul(&tuple.factors()[1].densify())
        .ok()?;
    (product.relative_residual(a).ok()? <= 1e-12).then_some(tuple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_dense;
    use crate::minimal::compose_rho;

    #[test]
    fn diagonal_branch() {
        let a = DenseMatrix::from_real_rows(&[[3.0, 0.0], [0.0, -2.0]]).unwrap();
        let tuple = closed_form_2x2(&a, 0).unwrap();
        let expected_first = DenseMatrix::from_real_rows(&[[0.0, 3.0], [-2.0, 0.0]]).unwrap();
        assert_eq!(tuple.factors()[0].densify(), expected_first);
        assert_eq!(compose_rho(&tuple), a);
        let identity = DenseMatrix::identity(2);
        assert_eq!(
            compose_rho(&closed_form_2x2(&identity, 1).unwrap()),
            identity
        );
    }

    #[test]
    fn random_targets() {
        let mut rng = rng_from_seed(8);
        for seed in 0..50 {
            let a = random_dense(&mut rng, 2);
            let tuple = closed_form_2x2(&a, seed).unwrap();
            assert!(compose_rho(&tuple).relative_residual(&a).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn lower_corner_zero_uses_u_branch() {
        let a = DenseMatrix::from_real_rows(&[[1.0, 2.0], [0.0, 5.0]]).unwrap();
        let tuple = closed_form_2x2(&a, 3).unwrap();
        assert!(compose_rho(&tuple).relative_residual(&a).unwrap() <= 1e-12);
        let f = tuple.factors()[1].diagonals();
        let params = ClosedForm2Params {
            s: f[1],
            t: f[2],
            u: f[0],
        };
        assert!(params.cubic_constraint(&a).norm() < 1e-12);
    }

    #[test]
    fn rejects_other_sizes() {
        assert!(closed_form_2x2(&DenseMatrix::identity(3), 0).is_err());
    }
}
