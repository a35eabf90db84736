use super::dense::{DenseMatrix, Scalar};
use super::toeplitz::ToeplitzSpec;
use crate::error::{Error, Result};

/// Hankel matrix stored by its `2n − 1` anti-diagonal values; entry `(i, j)`
/// (zero-based) is `antidiag[i + j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelSpec {
    n: usize,
    antidiag: Vec<Scalar>,
}

impl HankelSpec {
    pub fn new(n: usize, antidiag: Vec<Scalar>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidStructure(
                "dimension must be at least 1".into(),
            ));
        }
        if antidiag.len() != 2 * n - 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * n - 1,
                got: antidiag.len(),
            });
        }
        if let Some(index) = antidiag
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { n, antidiag })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0);
        Self {
            n,
            antidiag: vec![Scalar::new(0.0, 0.0); 2 * n - 1],
        }
    }

    /// The exchange matrix: ones where `i + j = n − 1`.
    pub fn exchange(n: usize) -> Self {
        let mut h = Self::zeros(n);
        h.antidiag[n - 1] = Scalar::new(1.0, 0.0);
        h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn antidiagonals(&self) -> &[Scalar] {
        &self.antidiag
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.antidiag[i + j]
    }

    pub fn densify(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, |i, j| self.entry(i, j))
    }

    /// The Toeplitz matrix `H·J` (columns reversed), whose diagonal `k`
    /// carries `antidiag[n − 1 − k]`.
    pub fn column_reversed_toeplitz(&self) -> ToeplitzSpec {
        let mut diag = self.antidiag.clone();
        diag.reverse();
        ToeplitzSpec::new(self.n, diag).expect("lengths agree")
    }

    pub fn detect(a: &DenseMatrix, tol: f64) -> Option<Self> {
        let deviation = hankel_deviation(a);
        if deviation > 0.0 && deviation > tol * a.max_abs() {
            return None;
        }
        let n = a.n();
        let antidiag = (0..2 * n - 1)
            .map(|s| {
                let lo = s.saturating_sub(n - 1);
                let hi = s.min(n - 1);
                let sum: Scalar = (lo..=hi).map(|i| a[(i, s - i)]).sum();
                sum / (hi - lo + 1) as f64
            })
            .collect();
        Some(Self { n, antidiag })
    }
}

/// Largest `|a_{i,j+1} − a_{i+1,j}|` over the matrix.
pub fn hankel_deviation(a: &DenseMatrix) -> f64 {
    let n = a.n();
    let mut worst: f64 = 0.0;
    for i in 0..n.saturating_sub(1) {
        for j in 0..n - 1 {
            worst = worst.max((a[(i, j + 1)] - a[(i + 1, j)]).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn densify_constant_antidiagonals() {
        let vals: Vec<_> = (1..=5).map(|v| Scalar::new(v as f64, 0.0)).collect();
        let h = HankelSpec::new(3, vals).unwrap().densify();
        let expected =
            DenseMatrix::from_real_rows(&[[1.0, 2.0, 3.0], [2.0, 3.0, 4.0], [3.0, 4.0, 5.0]])
                .unwrap();
        assert_eq!(h, expected);
        assert_eq!(HankelSpec::detect(&h, 0.0).unwrap().densify(), h);
    }

    #[test]
    fn exchange_matrix_is_anti_identity() {
        let j = HankelSpec::exchange(3).densify();
        let expected =
            DenseMatrix::from_real_rows(&[[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
                .unwrap();
        assert_eq!(j, expected);
    }

    #[test]
    fn non_hankel_is_rejected() {
        let a = DenseMatrix::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert!(HankelSpec::detect(&a, 1e-10).is_none());
        assert!(HankelSpec::new(2, vec![Scalar::default(); 2]).is_err());
    }
}
