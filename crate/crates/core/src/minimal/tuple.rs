use crate::error::{Error, Result};
use crate::structmat::{DenseMatrix, HankelSpec, Scalar, ToeplitzSpec};

/// Which structured family a factor's `2n − 1` coordinates parameterize.
///
/// Coordinate `j ∈ 0..2n−1` is the coefficient of a 0/1 basis matrix: for
/// Toeplitz factors it is `B_{j−(n−1)}` (diagonal storage order), for Hankel
/// factors it is the anti-diagonal `a + b = j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Toeplitz,
    Hankel,
}

impl FactorKind {
    pub(crate) fn densify(self, n: usize, coords: &[Scalar]) -> DenseMatrix {
        match self {
            FactorKind::Toeplitz => DenseMatrix::from_fn(n, |a, b| coords[b + n - 1 - a]),
            FactorKind::Hankel => DenseMatrix::from_fn(n, |a, b| coords[a + b]),
        }
    }

    /// Positions `(a, b)` of the ones in basis matrix `j`.
    pub(crate) fn support(self, n: usize, j: usize) -> impl Iterator<Item = (usize, usize)> {
        (0..n).filter_map(move |a| {
            let b = match self {
                FactorKind::Toeplitz => (a + j).checked_sub(n - 1)?,
                FactorKind::Hankel => j.checked_sub(a)?,
            };
            (b < n).then_some((a, b))
        })
    }
}

/// `r` Toeplitz factors of a common size.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzTuple {
    factors: Vec<ToeplitzSpec>,
}

impl ToeplitzTuple {
    pub fn new(factors: Vec<ToeplitzSpec>) -> Result<Self> {
        let n = factors.first().ok_or(Error::EmptyChain)?.n();
        if let Some(bad) = factors.iter().find(|t| t.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.n(),
            });
        }
        Ok(Self { factors })
    }

    pub fn r(&self) -> usize {
        self.factors.len()
    }

    pub fn n(&self) -> usize {
        self.factors[0].n()
    }

    pub fn factors(&self) -> &[ToeplitzSpec] {
        &self.factors
    }

    pub fn into_factors(self) -> Vec<ToeplitzSpec> {
        self.factors
    }

    /// All coordinates, factor by factor in diagonal storage order.
    pub fn coordinates(&self) -> Vec<Scalar> {
        self.factors
            .iter()
            .flat_map(|t| t.diagonals().iter().copied())
            .collect()
    }
}

/// `T₁T₂⋯T_r`.
pub fn compose_rho(tuple: &ToeplitzTuple) -> DenseMatrix {
    product(FactorKind::Toeplitz, tuple.n(), &tuple.coordinates())
}

/// `H₁H₂⋯H_r`.
pub fn compose_hankel(factors: &[HankelSpec]) -> Result<DenseMatrix> {
    let n = factors.first().ok_or(Error::EmptyChain)?.n();
    let coords: Vec<Scalar> = factors
        .iter()
        .flat_map(|h| h.antidiagonals().iter().copied())
        .collect();
    if coords.len() != factors.len() * (2 * n - 1) {
        return Err(Error::DimensionMismatch {
            expected: factors.len() * (2 * n - 1),
            got: coords.len(),
        });
    }
    Ok(product(FactorKind::Hankel, n, &coords))
}

pub(crate) fn product(kind: FactorKind, n: usize, coords: &[Scalar]) -> DenseMatrix {
    let m = 2 * n - 1;
    coords
        .chunks(m)
        .map(|c| kind.densify(n, c))
        .reduce(|acc, f| acc.matmul(&f).expect("common size"))
        .expect("at least one factor")
}

/// The differential of the product map as an `n² × r(2n−1)` matrix.
///
/// Row `p·n + q` is entry `(p, q)` (row-major vec); column `i·(2n−1) + j` is
/// the derivative with respect to coordinate `j` of factor `i`, namely
/// `vec(T₁⋯T_{i−1} · Basis_j · T_{i+1}⋯T_r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub entries: Vec<Scalar>,
}

impl JacobianMatrix {
    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries[row * self.cols + col]
    }

    pub fn column(&self, col: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Scalar> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }
}

pub fn jacobian_rho(tuple: &ToeplitzTuple) -> JacobianMatrix {
    jacobian(FactorKind::Toeplitz, tuple.n(), &tuple.coordinates())
}

pub fn jacobian_hankel(factors: &[HankelSpec]) -> JacobianMatrix {
    let n = factors[0].n();
    let coords: Vec<Scalar> = factors
        .iter()
        .flat_map(|h| h.antidiagonals().iter().copied())
        .collect();
    jacobian(FactorKind::Hankel, n, &coords)
}

pub(crate) fn jacobian(kind: FactorKind, n: usize, coords: &[Scalar]) -> JacobianMatrix {
    let m = 2 * n - 1;
    let dense: Vec<DenseMatrix> = coords.chunks(m).map(|c| kind.densify(n, c)).collect();
    let r = dense.len();
    let mut prefix = vec![DenseMatrix::identity(n)];
    for f in &dense[..r - 1] {
        let next = prefix.last().unwrap().matmul(f).expect("common size");
        prefix.push(next);
    }
    let mut suffix = vec![DenseMatrix::identity(n); r];
    for i in (0..r - 1).rev() {
        suffix[i] = dense[i + 1].matmul(&suffix[i + 1]).expect("common size");
    }

    let cols = r * m;
    let mut entries = vec![Scalar::new(0.0, 0.0); n * n * cols];
    for i in 0..r {
        let (left, right) = (&prefix[i], &suffix[i]);
        for j in 0..m {
            let col = i * m + j;
            for (a, b) in kind.support(n, j) {
                for p in 0..n {
                    let lpa = left[(p, a)];
                    if lpa == Scalar::new(0.0, 0.0) {
                        continue;
                    }
                    for (q, &rbq) in right.row(b).iter().enumerate() {
                        entries[(p * n + q) * cols + col] += lpa * rbq;
                    }
                }
            }
        }
    }
    JacobianMatrix {
        rows: n * n,
        cols,
        entries,
    }
}

/// The tuple whose `i`-th factor (1-based) is `B₀ + t_i (B_{n−i} − B_{−(n−i)})`
/// for `i = 1..r`, with `r = t.len()`. A factor with `n − i = 0` is `I`.
pub fn certificate_point(n: usize, t: &[Scalar]) -> Result<ToeplitzTuple> {
    if n == 0 || t.is_empty() || t.len() > n {
        return Err(Error::InvalidConfig(format!(
            "certificate point needs 1 ≤ r ≤ n, got r = {} for n = {n}",
            t.len()
        )));
    }
    let factors = t
        .iter()
        .enumerate()
        .map(|(idx, &ti)| {
            let shift = (n - 1 - idx) as isize;
            let mut f = ToeplitzSpec::identity(n);
            if shift > 0 {
                f.set(shift, ti);
                f.set(-shift, -ti);
            }
            f
        })
        .collect();
    ToeplitzTuple::new(factors)
}

/// Number of factors of the minimal route, `⌊n/2⌋ + 1`.
pub fn minimal_factor_count(n: usize) -> usize {
    n / 2 + 1
}

/// Outcome of [`rank_certificate`].
#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub n: usize,
    pub r: usize,
    pub rank: usize,
    pub required_rank: usize,
    /// `(r − 1)(2n − 1) < n²`: one factor fewer cannot reach a generic matrix.
    pub sharp: bool,
    pub pass: bool,
}

/// Singular values above `1e−8 · σ_max`.
pub fn numerical_rank(m: &nalgebra::DMatrix<Scalar>) -> usize {
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-8 * top).count()
}

pub fn dimension_is_sharp(n: u64) -> bool {
    (n / 2) * (2 * n - 1) < n * n
}

/// Rank of the product-map Jacobian at a seeded certificate point with
/// `r = ⌊n/2⌋ + 1`.
pub fn rank_certificate(n: usize, seed: u64) -> Result<RankReport> {
    if n < 2 {
        return Err(Error::InvalidConfig("rank certificate needs n ≥ 2".into()));
    }
    use rand::Rng;
    let r = minimal_factor_count(n);
    let mut rng = crate::gen::rng_from_seed(seed);
    let t: Vec<Scalar> = (0..r)
        .map(|_| Scalar::new(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5)))
        .collect();
    let tuple = certificate_point(n, &t)?;
    let rank = numerical_rank(&jacobian_rho(&tuple).to_nalgebra());
    let required_rank = n * n;
    let sharp = dimension_is_sharp(n as u64);
    Ok(RankReport {
        n,
        r,
        rank,
        required_rank,
        sharp,
        pass: rank == required_rank && sharp,
    })
}
