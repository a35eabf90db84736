use super::dense::{DenseMatrix, Scalar};
use crate::error::{Error, Result};

/// Permutation matrix `P` with `P·e_i = e_{perm[i]}` (zero-based).
///
/// A cycle such as `(1 → 3 → 2)` therefore has a one in column 1, row 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationSpec {
    perm: Vec<usize>,
}

impl PermutationSpec {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        if n == 0 {
            return Err(Error::InvalidStructure(
                "dimension must be at least 1".into(),
            ));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidStructure(format!(
                    "{perm:?} is not a permutation of 0..{n}"
                )));
            }
        }
        Ok(Self { perm })
    }

    /// Parses one-based images as written in chain files.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidStructure(
                "permutation images are one-based".into(),
            ));
        }
        Self::new(images.iter().map(|&p| p - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(a, b);
        Self { perm }
    }

    /// The anti-diagonal exchange permutation `i ↦ n − 1 − i`.
    pub fn exchange(n: usize) -> Self {
        Self {
            perm: (0..n).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.perm
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.perm.iter().map(|p| p + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// The permutation whose matrix is `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        Self {
            perm: other.perm.iter().map(|&q| self.perm[q]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        Self { perm: inv }
    }

    /// `(P·x)[perm[i]] = x[i]`.
    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::new(0.0, 0.0); x.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = x[i];
        }
        out
    }

    pub fn densify(&self) -> DenseMatrix {
        let n = self.n();
        let mut m = DenseMatrix::zeros(n);
        for (i, &p) in self.perm.iter().enumerate() {
            m[(p, i)] = Scalar::new(1.0, 0.0);
        }
        m
    }

    /// `M·P`: column `i` of the result is column `perm[i]` of `M`.
    pub fn right_multiply(&self, m: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::from_fn(m.n(), |r, i| m[(r, self.perm[i])])
    }

    /// `P·M`: row `perm[i]` of the result is row `i` of `M`.
    pub fn left_multiply(&self, m: &DenseMatrix) -> DenseMatrix {
        let inv = self.inverse();
        DenseMatrix::from_fn(m.n(), |r, c| m[(inv.perm[r], c)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_densifies_to_exchange() {
        let p = PermutationSpec::transposition(2, 0, 1).densify();
        assert_eq!(
            p,
            DenseMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap()
        );
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(PermutationSpec::new(vec![0, 0, 1]).is_err());
        assert!(PermutationSpec::new(vec![0, 3, 1]).is_err());
        assert!(PermutationSpec::from_one_based(&[0, 1]).is_err());
        assert!(PermutationSpec::new(vec![]).is_err());
    }

    #[test]
    fn composition_matches_matrix_product() {
        let p = PermutationSpec::new(vec![2, 0, 3, 1]).unwrap();
        let q = PermutationSpec::new(vec![1, 3, 0, 2]).unwrap();
        let lhs = p.compose(&q).densify();
        let rhs = p.densify().matmul(&q.densify()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn fast_products_match_dense() {
        let m = DenseMatrix::from_fn(4, |i, j| Scalar::new(i as f64, j as f64 * 0.5));
        let p = PermutationSpec::new(vec![3, 0, 2, 1]).unwrap();
        assert_eq!(p.right_multiply(&m), m.matmul(&p.densify()).unwrap());
        assert_eq!(p.left_multiply(&m), p.densify().matmul(&m).unwrap());
        let x: Vec<_> = (0..4).map(|i| Scalar::new(i as f64, 1.0)).collect();
        assert_eq!(p.apply(&x), p.densify().mul_vec(&x).unwrap());
    }

    #[test]
    fn three_cycle_convention() {
        // (1 → 3 → 2): column 1 carries its one in row 3.
        let p = PermutationSpec::from_one_based(&[3, 1, 2])
            .unwrap()
            .densify();
        assert_eq!(p[(2, 0)], Scalar::new(1.0, 0.0));
        let swap12 = PermutationSpec::transposition(3, 0, 1);
        let swap13 = PermutationSpec::transposition(3, 0, 2);
        assert_eq!(swap12.compose(&swap13).one_based(), vec![3, 1, 2]);
    }
}
