//! Seeded random matrices for tests, benchmarks and the `gen` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::structmat::{DenseMatrix, HankelSpec, Scalar, ToeplitzSpec};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent seed for the `index`-th sub-task of a run seeded with `seed`
/// (splitmix64 finalizer over the pair).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Complex standard normal: real and imaginary parts i.i.d. `N(0, 1/2)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Scalar::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_normal_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| complex_normal(rng)).collect()
}

pub fn random_dense<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseMatrix {
    DenseMatrix::new(n, complex_normal_vec(rng, n * n)).expect("finite entries")
}

pub fn random_toeplitz<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ToeplitzSpec {
    ToeplitzSpec::new(n, complex_normal_vec(rng, 2 * n - 1)).expect("finite entries")
}

pub fn random_hankel<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HankelSpec {
    HankelSpec::new(n, complex_normal_vec(rng, 2 * n - 1)).expect("finite entries")
}

/// Circulant with first column `c`: diagonal `k ≥ 0` holds `c[(n − k) mod n]`
/// and diagonal `−k` holds `c[k]`.
pub fn circulant(c: &[Scalar]) -> ToeplitzSpec {
    let n = c.len();
    let mut t = ToeplitzSpec::zeros(n);
    for k in 0..n {
        t.set(-(k as isize), c[k]);
        if k > 0 {
            t.set(k as isize, c[n - k]);
        }
    }
    t
}

pub fn random_circulant<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ToeplitzSpec {
    circulant(&complex_normal_vec(rng, n))
}

pub fn random_symmetric_toeplitz<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ToeplitzSpec {
    let half = complex_normal_vec(rng, n);
    let mut t = ToeplitzSpec::zeros(n);
    for (k, &v) in half.iter().enumerate() {
        t.set(k as isize, v);
        t.set(-(k as isize), v);
    }
    t
}

/// Persymmetric Hankel: anti-diagonal values symmetric about the middle one.
pub fn random_persymmetric_hankel<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HankelSpec {
    let half = complex_normal_vec(rng, n);
    let values = (0..2 * n - 1)
        .map(|s| half[if s < n { s } else { 2 * n - 2 - s }])
        .collect();
    HankelSpec::new(n, values).expect("finite entries")
}

/// Random matrix with `a_{ij} = a_{n−1−i, n−1−j}`.
pub fn random_centrosymmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (ri, rj) = (n - 1 - i, n - 1 - j);
            if (i, j) <= (ri, rj) {
                let v = complex_normal(rng);
                m[(i, j)] = v;
                m[(ri, rj)] = v;
            }
        }
    }
    m
}
