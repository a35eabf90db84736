use super::dense::{DenseMatrix, Scalar};
use crate::error::{Error, Result};

/// Toeplitz matrix stored by its `2n − 1` diagonal values.
///
/// Diagonal `k ∈ [−(n−1), n−1]` holds the entries `(i, j)` with `j − i = k`,
/// so `k > 0` addresses superdiagonals. The shift basis element `B_k` has its
/// ones on diagonal `k`: `B_1` is the superdiagonal shift, `B_{n−1}` is the
/// single top-right entry, and `B_{−k} = B_kᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzSpec {
    n: usize,
    diag: Vec<Scalar>,
}

impl ToeplitzSpec {
    /// `diag[k + n − 1]` is the value on diagonal `k`.
    pub fn new(n: usize, diag: Vec<Scalar>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidStructure(
                "dimension must be at least 1".into(),
            ));
        }
        if diag.len() != 2 * n - 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * n - 1,
                got: diag.len(),
            });
        }
        if let Some(index) = diag
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { n, diag })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0);
        Self {
            n,
            diag: vec![Scalar::new(0.0, 0.0); 2 * n - 1],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut t = Self::zeros(n);
        t.set(0, Scalar::new(1.0, 0.0));
        t
    }

    /// Builds `T(row, col)`: the Toeplitz matrix with the given first row and
    /// first column. The shared corner is taken from `row`.
    pub fn from_row_col(row: &[Scalar], col: &[Scalar]) -> Result<Self> {
        let n = row.len();
        if col.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: col.len(),
            });
        }
        let mut diag = Vec::with_capacity(2 * n - 1);
        diag.extend(col.iter().skip(1).rev().copied());
        diag.extend_from_slice(row);
        Self::new(n, diag)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Raw storage, ordered from diagonal `−(n−1)` to `n−1`.
    pub fn diagonals(&self) -> &[Scalar] {
        &self.diag
    }

    pub fn get(&self, k: isize) -> Scalar {
        self.diag[self.offset(k)]
    }

    pub fn set(&mut self, k: isize, value: Scalar) {
        let o = self.offset(k);
        self.diag[o] = value;
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.diag[j + self.n - 1 - i]
    }

    pub fn densify(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, |i, j| self.entry(i, j))
    }

    pub fn transpose(&self) -> Self {
        let mut diag = self.diag.clone();
        diag.reverse();
        Self { n: self.n, diag }
    }

    pub fn scale(&self, alpha: Scalar) -> Self {
        Self {
            n: self.n,
            diag: self.diag.iter().map(|&z| z * alpha).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.diag.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// True when every entry strictly below the main diagonal is exactly zero.
    pub fn is_upper_triangular(&self) -> bool {
        self.diag[..self.n - 1]
            .iter()
            .all(|z| *z == Scalar::new(0.0, 0.0))
    }

    /// Reads the diagonals of `a` if it is Toeplitz within `tol · ‖a‖_max`.
    pub fn detect(a: &DenseMatrix, tol: f64) -> Option<Self> {
        let deviation = toeplitz_deviation(a);
        if deviation > 0.0 && deviation > tol * a.max_abs() {
            return None;
        }
        let n = a.n();
        let mut t = Self::zeros(n);
        for k in -(n as isize - 1)..n as isize {
            t.set(k, diagonal_mean(a, k));
        }
        Some(t)
    }

    fn offset(&self, k: isize) -> usize {
        let n = self.n as isize;
        assert!(k.abs() < n, "diagonal {k} out of range for n = {n}");
        (k + n - 1) as usize
    }
}

fn diagonal_mean(a: &DenseMatrix, k: isize) -> Scalar {
    let n = a.n() as isize;
    let mut sum = Scalar::new(0.0, 0.0);
    let mut count = 0.0;
    for i in 0..n {
        let j = i + k;
        if (0..n).contains(&j) {
            sum += a[(i as usize, j as usize)];
            count += 1.0;
        }
    }
    sum / count
}

/// Largest `|a_{i,j} − a_{i+1,j+1}|` over the matrix.
pub fn toeplitz_deviation(a: &DenseMatrix) -> f64 {
    let n = a.n();
    let mut worst: f64 = 0.0;
    for i in 0..n.saturating_sub(1) {
        for j in 0..n - 1 {
            worst = worst.max((a[(i, j)] - a[(i + 1, j + 1)]).norm());
        }
    }
    worst
}

/// The shift basis matrix `B_k`: ones on diagonal `j − i = k`, zeros elsewhere.
pub fn shift_basis(k: isize, n: usize) -> Result<ToeplitzSpec> {
    if n == 0 || k.unsigned_abs() >= n {
        return Err(Error::ShiftOutOfRange { k, n });
    }
    let mut t = ToeplitzSpec::zeros(n);
    t.set(k, Scalar::new(1.0, 0.0));
    Ok(t)
}

/// Inverse of an upper-triangular Toeplitz matrix.
///
/// The diagonals of such a matrix are the coefficients of a polynomial
/// `p(x) = Σ w_k x^k`, and its inverse is the upper-triangular Toeplitz matrix
/// built from the power series of `1/p` truncated at degree `n − 1`.
pub fn ut_toeplitz_inverse(w: &ToeplitzSpec) -> Result<ToeplitzSpec> {
    if !w.is_upper_triangular() {
        return Err(Error::InvalidStructure(
            "matrix has nonzero entries below the main diagonal".into(),
        ));
    }
    let n = w.n();
    let lead = w.get(0);
    if lead.norm() < 1e-12 * w.max_abs() || lead.norm() == 0.0 {
        return Err(Error::SingularFactor {
            magnitude: lead.norm(),
        });
    }
    let p = &w.diagonals()[n - 1..];
    let inv_lead = lead.inv();
    let mut q = vec![Scalar::new(0.0, 0.0); n];
    q[0] = inv_lead;
    for k in 1..n {
        let acc: Scalar = (1..=k).map(|j| p[j] * q[k - j]).sum();
        q[k] = -acc * inv_lead;
    }
    let mut diag = vec![Scalar::new(0.0, 0.0); n - 1];
    diag.extend(q);
    ToeplitzSpec::new(n, diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    #[test]
    fn shift_basis_zero_is_identity() {
        assert_eq!(
            shift_basis(0, 3).unwrap().densify(),
            DenseMatrix::identity(3)
        );
    }

    #[test]
    fn shift_basis_one_is_superdiagonal() {
        let b = shift_basis(1, 5).unwrap().densify();
        for i in 0..5 {
            for j in 0..5 {
                let expected = if j == i + 1 { 1.0 } else { 0.0 };
                assert_eq!(b[(i, j)], c(expected));
            }
        }
    }

    #[test]
    fn shift_basis_top_right_corner() {
        for n in 2..7 {
            let b = shift_basis(n as isize - 1, n).unwrap().densify();
            let ones: Vec<_> = (0..n * n).filter(|&p| b.as_slice()[p] != c(0.0)).collect();
            assert_eq!(ones, vec![n - 1]);
        }
    }

    #[test]
    fn shift_basis_negative_is_transpose() {
        for k in 1..4 {
            let up = shift_basis(k, 4).unwrap().densify();
            let down = shift_basis(-k, 4).unwrap().densify();
            assert_eq!(up.transpose(), down);
        }
    }

    #[test]
    fn shift_basis_out_of_range() {
        assert!(matches!(
            shift_basis(3, 3),
            Err(Error::ShiftOutOfRange { k: 3, n: 3 })
        ));
        assert!(shift_basis(-3, 3).is_err());
    }

    #[test]
    fn densify_two_by_two() {
        let (d, a, b) = (c(7.0), c(1.0), c(2.0));
        let t = ToeplitzSpec::new(2, vec![d, a, b]).unwrap();
        let expected = DenseMatrix::new(2, vec![a, b, d, a]).unwrap();
        assert_eq!(t.densify(), expected);
    }

    #[test]
    fn shifting_up_the_three_by_three_example() {
        let a = DenseMatrix::from_real_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]])
            .unwrap();
        let shifted = shift_basis(1, 3).unwrap().densify().matmul(&a).unwrap();
        let expected =
            DenseMatrix::from_real_rows(&[[4.0, 5.0, 6.0], [7.0, 8.0, 9.0], [0.0, 0.0, 0.0]])
                .unwrap();
        assert_eq!(shifted, expected);
    }

    #[test]
    fn from_row_col_matches_row_and_column_notation() {
        let row = [c(4.0), c(3.0), c(2.0)];
        let col = [c(4.0), c(0.0), c(1.0)];
        let t = ToeplitzSpec::from_row_col(&row, &col).unwrap().densify();
        let expected =
            DenseMatrix::from_real_rows(&[[4.0, 3.0, 2.0], [0.0, 4.0, 3.0], [1.0, 0.0, 4.0]])
                .unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn detect_round_trip_and_rejection() {
        let t = ToeplitzSpec::new(3, vec![c(1.0), c(2.0), c(3.0), c(4.0), c(5.0)]).unwrap();
        assert_eq!(ToeplitzSpec::detect(&t.densify(), 1e-12), Some(t));
        let a = DenseMatrix::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(ToeplitzSpec::detect(&a, 1e-12), None);
    }

    #[test]
    fn inverse_of_scaled_identity() {
        let w = ToeplitzSpec::identity(4).scale(c(2.0));
        assert_eq!(
            ut_toeplitz_inverse(&w).unwrap(),
            ToeplitzSpec::identity(4).scale(c(0.5))
        );
    }

    #[test]
    fn inverse_of_identity_plus_shift_is_alternating_series() {
        let mut w = ToeplitzSpec::identity(3);
        w.set(1, c(1.0));
        let v = ut_toeplitz_inverse(&w).unwrap();
        let mut expected = ToeplitzSpec::identity(3);
        expected.set(1, c(-1.0));
        expected.set(2, c(1.0));
        assert_eq!(v, expected);
        assert_eq!(
            w.densify().matmul(&v.densify()).unwrap(),
            DenseMatrix::identity(3)
        );
    }

    #[test]
    fn inverse_rejects_singular_and_lower_entries() {
        let mut w = ToeplitzSpec::zeros(3);
        w.set(1, c(1.0));
        assert!(matches!(
            ut_toeplitz_inverse(&w),
            Err(Error::SingularFactor { .. })
        ));
        let mut lower = ToeplitzSpec::identity(3);
        lower.set(-1, c(1.0));
        assert!(matches!(
            ut_toeplitz_inverse(&lower),
            Err(Error::InvalidStructure(_))
        ));
        assert!(ut_toeplitz_inverse(&ToeplitzSpec::zeros(2)).is_err());
    }
}
