//! Necessary conditions for being a product of restricted factor classes.
//!
//! Symmetric Toeplitz matrices and persymmetric Hankel matrices both lie in
//! the centrosymmetric set `S = {X : x_{ij} = x_{n−1−i, n−1−j}}`, which is
//! closed under multiplication; a matrix outside `S` is therefore not a
//! product of either kind, however many factors are allowed. Every circulant
//! has the all-ones vector as an eigenvector, so every product of circulants
//! does too.

use crate::structmat::{hankel_deviation, toeplitz_deviation, DenseMatrix, Scalar};

pub use crate::structmat::DEFAULT_TOLERANCE;

/// Whether a structural property holds within tolerance, with the measured
/// deviation relative to `‖A‖_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub holds: bool,
    pub deviation: f64,
}

impl Membership {
    fn from_deviation(absolute: f64, a: &DenseMatrix, tol: f64) -> Self {
        let scale = a.max_abs();
        let deviation = if scale > 0.0 {
            absolute / scale
        } else {
            absolute
        };
        Self {
            holds: deviation <= tol,
            deviation,
        }
    }
}

fn max_pair_deviation(a: &DenseMatrix, partner: impl Fn(usize, usize) -> (usize, usize)) -> f64 {
    let n = a.n();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (p, q) = partner(i, j);
            worst = worst.max((a[(i, j)] - a[(p, q)]).norm());
        }
    }
    worst
}

pub fn is_centrosymmetric(a: &DenseMatrix, tol: f64) -> Membership {
    let n = a.n();
    let dev = max_pair_deviation(a, |i, j| (n - 1 - i, n - 1 - j));
    Membership::from_deviation(dev, a, tol)
}

pub fn is_symmetric_toeplitz(a: &DenseMatrix, tol: f64) -> Membership {
    let dev = toeplitz_deviation(a).max(max_pair_deviation(a, |i, j| (j, i)));
    Membership::from_deviation(dev, a, tol)
}

/// Hankel and symmetric about the anti-diagonal.
pub fn is_persymmetric_hankel(a: &DenseMatrix, tol: f64) -> Membership {
    let n = a.n();
    let dev = hankel_deviation(a).max(max_pair_deviation(a, |i, j| (n - 1 - j, n - 1 - i)));
    Membership::from_deviation(dev, a, tol)
}

pub fn is_circulant(a: &DenseMatrix, tol: f64) -> Membership {
    let n = a.n();
    let dev = max_pair_deviation(a, |i, j| ((i + 1) % n, (j + 1) % n));
    Membership::from_deviation(dev, a, tol)
}

/// How far the all-ones vector is from being an eigenvector of `A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CirculantObstruction {
    /// `min_λ ‖A·1 − λ·1‖₂ / ‖A·1‖₂`, or `‖A·1‖₂` itself when `zero_image`.
    pub residual: f64,
    /// `A·1 = 0`: the all-ones vector is an eigenvector for `λ = 0`.
    pub zero_image: bool,
}

pub fn circulant_obstruction(a: &DenseMatrix) -> CirculantObstruction {
    let n = a.n();
    let image: Vec<Scalar> = (0..n).map(|i| a.row(i).iter().sum()).collect();
    let norm = image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return CirculantObstruction {
            residual: norm,
            zero_image: true,
        };
    }
    // Least-squares eigenvalue: the mean row sum.
    let lambda: Scalar = image.iter().sum::<Scalar>() / n as f64;
    let off = image
        .iter()
        .map(|z| (z - lambda).norm_sqr())
        .sum::<f64>()
        .sqrt();
    CirculantObstruction {
        residual: off / norm,
        zero_image: false,
    }
}

/// Membership of `A` in each restricted class, and which classes cannot
/// have `A` as a product of their members.
///
/// A `false` in a `*_ruled_out` field does not mean such a product exists.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub tolerance: f64,
    pub centrosymmetric: Membership,
    pub allones_eigvec_residual: f64,
    pub allones_zero_image: bool,
    pub symmetric_toeplitz: Membership,
    pub persymmetric_hankel: Membership,
    pub circulant: Membership,
    pub symmetric_toeplitz_ruled_out: bool,
    pub persymmetric_hankel_ruled_out: bool,
    pub circulant_ruled_out: bool,
}

impl StructureReport {
    /// Names of the ruled-out classes, in a fixed order.
    pub fn ruled_out(&self) -> Vec<&'static str> {
        [
            (self.symmetric_toeplitz_ruled_out, "symmetric-toeplitz"),
            (self.persymmetric_hankel_ruled_out, "persymmetric-hankel"),
            (self.circulant_ruled_out, "circulant"),
        ]
        .into_iter()
        .filter_map(|(flag, name)| flag.then_some(name))
        .collect()
    }
}

pub fn decomposability_screen(a: &DenseMatrix, tol: f64) -> StructureReport {
    let centro = is_centrosymmetric(a, tol);
    let obstruction = circulant_obstruction(a);
    // The exchange matrix is itself centrosymmetric, so the rotated trap set
    // for Hankel products coincides with S.
    StructureReport {
        tolerance: tol,
        centrosymmetric: centro,
        allones_eigvec_residual: obstruction.residual,
        allones_zero_image: obstruction.zero_image,
        symmetric_toeplitz: is_symmetric_toeplitz(a, tol),
        persymmetric_hankel: is_persymmetric_hankel(a, tol),
        circulant: is_circulant(a, tol),
        symmetric_toeplitz_ruled_out: !centro.holds,
        persymmetric_hankel_ruled_out: !centro.holds,
        circulant_ruled_out: !obstruction.zero_image && obstruction.residual > tol,
    }
}
