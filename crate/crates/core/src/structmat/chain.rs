use super::dense::DenseMatrix;
use super::fft::CirculantEmbedding;
use super::hankel::HankelSpec;
use super::permutation::PermutationSpec;
use super::toeplitz::ToeplitzSpec;
use crate::error::{Error, Result};

/// Above this dimension, products with Toeplitz and Hankel factors go through
/// the circulant embedding row by row instead of dense multiplication.
const FFT_PRODUCT_THRESHOLD: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Toeplitz(ToeplitzSpec),
    Hankel(HankelSpec),
    Permutation(PermutationSpec),
}

impl Factor {
    pub fn n(&self) -> usize {
        match self {
            Factor::Toeplitz(t) => t.n(),
            Factor::Hankel(h) => h.n(),
            Factor::Permutation(p) => p.n(),
        }
    }

    pub fn densify(&self) -> DenseMatrix {
        match self {
            Factor::Toeplitz(t) => t.densify(),
            Factor::Hankel(h) => h.densify(),
            Factor::Permutation(p) => p.densify(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Factor::Toeplitz(_) => "toeplitz",
            Factor::Hankel(_) => "hankel",
            Factor::Permutation(_) => "permutation",
        }
    }

    /// `m · self`.
    fn right_multiply(&self, m: &DenseMatrix) -> Result<DenseMatrix> {
        match self {
            Factor::Permutation(p) => Ok(p.right_multiply(m)),
            Factor::Toeplitz(t) => toeplitz_right_multiply(m, t),
            Factor::Hankel(h) => {
                let reversed = toeplitz_right_multiply(m, &h.column_reversed_toeplitz())?;
                Ok(PermutationSpec::exchange(h.n()).right_multiply(&reversed))
            }
        }
    }
}

fn toeplitz_right_multiply(m: &DenseMatrix, t: &ToeplitzSpec) -> Result<DenseMatrix> {
    let n = m.n();
    if n <= FFT_PRODUCT_THRESHOLD {
        return m.matmul(&t.densify());
    }
    // Row x of M·T is (Tᵀ·xᵀ)ᵀ.
    let embedding = CirculantEmbedding::new(&t.transpose());
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        data.extend(embedding.apply(m.row(i)));
    }
    DenseMatrix::new(n, data)
}

/// An ordered product of structured factors, optionally preceded by a
/// leading permutation.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorChain {
    n: usize,
    pub leading_permutation: Option<PermutationSpec>,
    pub factors: Vec<Factor>,
}

impl FactorChain {
    pub fn new(
        n: usize,
        leading_permutation: Option<PermutationSpec>,
        factors: Vec<Factor>,
    ) -> Result<Self> {
        let dims = leading_permutation
            .iter()
            .map(PermutationSpec::n)
            .chain(factors.iter().map(Factor::n));
        for got in dims {
            if got != n {
                return Err(Error::DimensionMismatch { expected: n, got });
            }
        }
        Ok(Self {
            n,
            leading_permutation,
            factors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, tag: &str) -> usize {
        self.factors.iter().filter(|f| f.tag() == tag).count()
    }
}

/// Left-to-right product of the chain's factors.
pub fn dense_product(chain: &FactorChain) -> Result<DenseMatrix> {
    if chain.factors.is_empty() && chain.leading_permutation.is_none() {
        return Err(Error::EmptyChain);
    }
    let mut acc = match &chain.leading_permutation {
        Some(p) => p.densify(),
        None => DenseMatrix::identity(chain.n),
    };
    for factor in &chain.factors {
        if factor.n() != chain.n {
            return Err(Error::DimensionMismatch {
                expected: chain.n,
                got: factor.n(),
            });
        }
        acc = factor.right_multiply(&acc)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structmat::Scalar;

    #[test]
    fn identity_pair() {
        let chain = FactorChain::new(
            3,
            None,
            vec![
                Factor::Toeplitz(ToeplitzSpec::identity(3)),
                Factor::Toeplitz(ToeplitzSpec::identity(3)),
            ],
        )
        .unwrap();
        assert_eq!(dense_product(&chain).unwrap(), DenseMatrix::identity(3));
    }

    #[test]
    fn empty_and_mismatched_chains() {
        let empty = FactorChain::new(2, None, vec![]).unwrap();
        assert!(matches!(dense_product(&empty), Err(Error::EmptyChain)));
        let bad = FactorChain::new(2, None, vec![Factor::Toeplitz(ToeplitzSpec::identity(3))]);
        assert!(matches!(
            bad,
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 3
            })
        ));
    }

    #[test]
    fn fft_path_matches_dense_path() {
        let n = FFT_PRODUCT_THRESHOLD + 5;
        let diag: Vec<_> = (0..2 * n - 1)
            .map(|k| Scalar::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let t = ToeplitzSpec::new(n, diag.clone()).unwrap();
        let h = HankelSpec::new(n, diag).unwrap();
        let m = DenseMatrix::from_fn(n, |i, j| {
            Scalar::new((i * j % 7) as f64, i as f64 - j as f64)
        });
        let via_fft = Factor::Toeplitz(t.clone()).right_multiply(&m).unwrap();
        let dense = m.matmul(&t.densify()).unwrap();
        assert!(via_fft.relative_residual(&dense).unwrap() < 1e-13);
        let via_fft = Factor::Hankel(h.clone()).right_multiply(&m).unwrap();
        let dense = m.matmul(&h.densify()).unwrap();
        assert!(via_fft.relative_residual(&dense).unwrap() < 1e-13);
    }
}
