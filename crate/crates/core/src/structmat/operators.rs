use super::dense::DenseMatrix;
use super::hankel::HankelSpec;
use super::toeplitz::ToeplitzSpec;

/// Index-permuting operators on square matrices.
///
/// With one-based indices: `Aᵀ = (a_{j,i})`, `Aᴿ` is the counter-clockwise
/// quarter turn (`(Aᴿ)_{i,j} = a_{j,n+1−i}`), `Aˢ = (a_{i,n+1−j})` reverses
/// columns and `Aᶠ = (a_{n+1−i,j})` reverses rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Transpose,
    Rotate,
    Swap,
    Flip,
}

pub fn apply_operator(a: &DenseMatrix, op: Operator) -> DenseMatrix {
    let n = a.n();
    let last = n - 1;
    match op {
        Operator::Transpose => DenseMatrix::from_fn(n, |i, j| a[(j, i)]),
        Operator::Rotate => DenseMatrix::from_fn(n, |i, j| a[(j, last - i)]),
        Operator::Swap => DenseMatrix::from_fn(n, |i, j| a[(i, last - j)]),
        Operator::Flip => DenseMatrix::from_fn(n, |i, j| a[(last - i, j)]),
    }
}

/// Applies operators left to right, so `apply_chain(a, &[S, R])` is `Aˢᴿ`.
pub fn apply_chain(a: &DenseMatrix, ops: &[Operator]) -> DenseMatrix {
    ops.iter().fold(a.clone(), |m, &op| apply_operator(&m, op))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `J·T` (left) or `T·J` (right) where `J` is the exchange matrix; both are Hankel.
pub fn hankel_from_toeplitz(t: &ToeplitzSpec, side: Side) -> HankelSpec {
    let mut values = t.diagonals().to_vec();
    if side == Side::Right {
        values.reverse();
    }
    HankelSpec::new(t.n(), values).expect("lengths agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structmat::Scalar;
    use Operator::*;

    fn worked_example() -> DenseMatrix {
        DenseMatrix::from_real_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]).unwrap()
    }

    #[test]
    fn displayed_operator_examples() {
        let a = worked_example();
        let rows = |r: [[f64; 3]; 3]| DenseMatrix::from_real_rows(&r).unwrap();
        assert_eq!(
            apply_operator(&a, Transpose),
            rows([[1.0, 4.0, 7.0], [2.0, 5.0, 8.0], [3.0, 6.0, 9.0]])
        );
        assert_eq!(
            apply_operator(&a, Rotate),
            rows([[3.0, 6.0, 9.0], [2.0, 5.0, 8.0], [1.0, 4.0, 7.0]])
        );
        assert_eq!(
            apply_operator(&a, Swap),
            rows([[3.0, 2.0, 1.0], [6.0, 5.0, 4.0], [9.0, 8.0, 7.0]])
        );
        assert_eq!(
            apply_operator(&a, Flip),
            rows([[7.0, 8.0, 9.0], [4.0, 5.0, 6.0], [1.0, 2.0, 3.0]])
        );
    }

    #[test]
    fn involutions_on_example() {
        let a = worked_example();
        assert_eq!(apply_chain(&a, &[Swap, Swap]), a);
        assert_eq!(apply_chain(&a, &[Flip, Flip]), a);
        assert_eq!(apply_chain(&a, &[Rotate; 4]), a);
    }

    #[test]
    fn identity_to_exchange() {
        let h = hankel_from_toeplitz(&ToeplitzSpec::identity(4), Side::Left);
        assert_eq!(h, HankelSpec::exchange(4));
        assert_eq!(
            hankel_from_toeplitz(&ToeplitzSpec::identity(4), Side::Right),
            HankelSpec::exchange(4)
        );
    }

    #[test]
    fn exchange_products_match_dense() {
        let diag: Vec<_> = (0..7)
            .map(|k| Scalar::new(k as f64 + 1.0, -(k as f64)))
            .collect();
        let t = ToeplitzSpec::new(4, diag).unwrap();
        let j = HankelSpec::exchange(4).densify();
        let left = j.matmul(&t.densify()).unwrap();
        let right = t.densify().matmul(&j).unwrap();
        assert_eq!(hankel_from_toeplitz(&t, Side::Left).densify(), left);
        assert_eq!(hankel_from_toeplitz(&t, Side::Right).densify(), right);
    }
}
