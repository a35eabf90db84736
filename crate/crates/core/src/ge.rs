//! Decomposition of a generic matrix into `2n` Toeplitz factors and `n`
//! permutations by Gaussian elimination without pivoting:
//!
//! ```text
//! A = T₁ T₂ P₁ T₃ T₄ P₂ ⋯ T₂ₙ₋₁ T₂ₙ Pₙ
//! ```
//!
//! 1. `A = (I + v₁e₁ᵀ)(I + v₂e₂ᵀ)⋯(I + vₙeₙᵀ)` ([`elementary_column_factorize`]).
//! 2. `I + v_k e_kᵀ = Q_k (I + w_k e₁ᵀ) Q_k⁻¹` for a permutation with
//!    `Q_k e₁ = e_k` and `w_k = Q_k⁻¹ v_k` ([`recenter`] uses the swap of 1 and k).
//! 3. `I + w e₁ᵀ = W (W⁻¹ + E_{n1})` with `W` upper-triangular Toeplitz whose
//!    last column is `w` ([`triangular_split`]).
//! 4. Adjacent permutations merge into `P_k = Q_k⁻¹ Q_{k+1}`, `Pₙ = Qₙ⁻¹`.
//!
//! The entries of `W⁻¹` are the power-series coefficients of `1/p` where `p`
//! has the entries of `w` as coefficients, and they grow like `ρ⁻ⁿ` when `p`
//! has a root of modulus `ρ < 1`. For random inputs this makes the plain
//! ordering useless in double precision beyond `n ≈ 12`. With
//! [`GeOrdering::Conditioned`] a stage whose growth exceeds
//! [`GROWTH_TARGET`] gets a different `Q_k` (any order of the entries of
//! `v_k` other than the pivot entry is admissible), and the first processed
//! column of `A` may be chosen freely since a trailing column permutation
//! folds into `Pₙ`. The factor count and interleaving are unchanged.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gen::{derive_seed, rng_from_seed};
use crate::structmat::{
    hankel_from_toeplitz, ut_toeplitz_inverse, DenseMatrix, Factor, FactorChain, PermutationSpec,
    Scalar, Side, ToeplitzSpec,
};

/// Pivots smaller than this multiple of `‖A‖_max` are treated as zero.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

/// Stages whose `max|W| · max|W⁻¹|` stays below this keep the plain ordering.
pub const GROWTH_TARGET: f64 = 1e2;

/// Total ordering-search evaluations per stage scale like `SEARCH_WORK / n`,
/// which keeps the search at O(n²) per stage.
const SEARCH_WORK: usize = 8192;
const SEARCH_RESTARTS: usize = 4;
const SEARCH_SEED: u64 = 0x7465_6f70;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GeOrdering {
    /// Columns in order and `Q_k` the swap of 1 and k, exactly as printed.
    Natural,
    /// Plain ordering unless a stage's triangular factor is badly conditioned.
    #[default]
    Conditioned,
}

/// The factor `I + v·e_kᵀ` (zero-based `column`).
#[derive(Clone, Debug, PartialEq)]
pub struct ElementaryColumnFactor {
    pub column: usize,
    pub v: Vec<Scalar>,
}

impl ElementaryColumnFactor {
    pub fn densify(&self) -> DenseMatrix {
        let mut m = DenseMatrix::identity(self.v.len());
        for (i, &vi) in self.v.iter().enumerate() {
            m[(i, self.column)] += vi;
        }
        m
    }
}

/// `Q·(I + w·e₁ᵀ)·Q⁻¹` with `Q·e₁ = e_column`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecenteredFactor {
    pub column: usize,
    pub pi: PermutationSpec,
    pub w: Vec<Scalar>,
}

impl RecenteredFactor {
    pub fn densify(&self) -> DenseMatrix {
        let inner = ElementaryColumnFactor {
            column: 0,
            v: self.w.clone(),
        }
        .densify();
        self.pi
            .inverse()
            .right_multiply(&self.pi.left_multiply(&inner))
    }
}

/// `I + w·e₁ᵀ = triangular · completion`, both Toeplitz.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularSplit {
    /// Upper-triangular Toeplitz with `w` as its last column.
    pub triangular: ToeplitzSpec,
    /// `triangular⁻¹ + E_{n1}`; the corner entry sits on diagonal `−(n−1)`.
    pub completion: ToeplitzSpec,
}

/// Step 1: reads `v_k` off column `k` of the working matrix and then strips
/// the factor with the rank-one inverse `I − v e_kᵀ / (1 + v_k)`.
pub fn elementary_column_factorize(a: &DenseMatrix) -> Result<Vec<ElementaryColumnFactor>> {
    let n = a.n();
    let threshold = PIVOT_THRESHOLD * a.max_abs();
    let mut work = a.clone();
    let mut factors = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = work[(k, k)];
        if pivot.norm() <= threshold || pivot.norm() == 0.0 {
            return Err(Error::NonGeneric {
                stage: k + 1,
                reason: "vanishing elimination pivot",
                magnitude: pivot.norm(),
            });
        }
        let mut v = work.column(k);
        v[k] -= Scalar::new(1.0, 0.0);
        // Only columns right of k are read again.
        let inv_pivot = pivot.inv();
        for j in k + 1..n {
            let coeff = work[(k, j)] * inv_pivot;
            if coeff == Scalar::new(0.0, 0.0) {
                continue;
            }
            for (i, &vi) in v.iter().enumerate() {
                work[(i, j)] -= vi * coeff;
            }
        }
        factors.push(ElementaryColumnFactor { column: k, v });
    }
    Ok(factors)
}

/// Step 2 with `Q_k` the transposition of the first index and `k`.
pub fn recenter(f: &ElementaryColumnFactor) -> RecenteredFactor {
    let n = f.v.len();
    recenter_with(f, PermutationSpec::transposition(n, 0, f.column))
}

/// Step 2 with an arbitrary `Q` satisfying `Q·e₁ = e_column`.
pub fn recenter_with(f: &ElementaryColumnFactor, pi: PermutationSpec) -> RecenteredFactor {
    assert_eq!(pi.images()[0], f.column, "Q must send e₁ to e_k");
    let w = pi.inverse().apply(&f.v);
    RecenteredFactor {
        column: f.column,
        pi,
        w,
    }
}

/// Step 3: builds `W` with first row `(w_n, w_{n−1}, …, w₁)` and zeros below
/// the diagonal, and `V = W⁻¹ + E_{n1}`.
///
/// `w = 0` (the stage factor is already the identity) yields the pair `(I, I)`.
pub fn triangular_split(w: &[Scalar]) -> Result<TriangularSplit> {
    let n = w.len();
    if n == 0 {
        return Err(Error::InvalidStructure("empty vector".into()));
    }
    if w.iter().all(|z| *z == Scalar::new(0.0, 0.0)) {
        return Ok(TriangularSplit {
            triangular: ToeplitzSpec::identity(n),
            completion: ToeplitzSpec::identity(n),
        });
    }
    let lead = w[n - 1];
    let scale = w.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if lead.norm() < PIVOT_THRESHOLD * scale || lead.norm() == 0.0 {
        return Err(Error::SingularFactor {
            magnitude: lead.norm(),
        });
    }
    let mut triangular = ToeplitzSpec::zeros(n);
    for k in 0..n {
        triangular.set(k as isize, w[n - 1 - k]);
    }
    let mut completion = ut_toeplitz_inverse(&triangular)?;
    let corner = -(n as isize - 1);
    completion.set(corner, completion.get(corner) + Scalar::new(1.0, 0.0));
    Ok(TriangularSplit {
        triangular,
        completion,
    })
}

/// `max|p| · max|1/p mod xⁿ|` for `p(x) = Σ w[n−1−j] xʲ`, or `None` once the
/// running value exceeds `bound`.
fn inverse_growth(w: &[Scalar], bound: f64) -> Option<f64> {
    let n = w.len();
    let p0 = w[n - 1];
    let pmax = w.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if p0.norm() <= PIVOT_THRESHOLD * pmax || p0.norm() == 0.0 {
        return None;
    }
    let inv_p0 = p0.inv();
    let mut q = Vec::with_capacity(n);
    q.push(inv_p0);
    let mut worst = inv_p0.norm() * pmax;
    for k in 1..n {
        let acc: Scalar = (1..=k).map(|j| w[n - 1 - j] * q[k - j]).sum();
        let qk = -acc * inv_p0;
        worst = worst.max(qk.norm() * pmax);
        if worst > bound {
            return None;
        }
        q.push(qk);
    }
    (worst <= bound).then_some(worst)
}

fn gather(v: &[Scalar], order: &[usize]) -> Vec<Scalar> {
    order.iter().map(|&i| v[i]).collect()
}

/// Chooses `Q_k` (as the index order `w[j] = v[order[j]]`, `order[0] = k`):
/// the plain swap when it is well conditioned, otherwise the best order found
/// by randomized pairwise-swap descent.
fn conditioned_order(f: &ElementaryColumnFactor) -> Vec<usize> {
    let n = f.v.len();
    let k = f.column;
    let mut plain: Vec<usize> = (0..n).collect();
    plain.swap(0, k);
    let plain_growth = inverse_growth(&gather(&f.v, &plain), f64::INFINITY);
    // Q₁ has nowhere to go in the chain, so stage 1 relies on the column choice.
    if k == 0 || n <= 2 || plain_growth.is_some_and(|g| g <= GROWTH_TARGET) {
        return plain;
    }

    let mut rng = rng_from_seed(derive_seed(SEARCH_SEED, k as u64));
    let mut best = (plain_growth.unwrap_or(f64::INFINITY), plain.clone());
    let others: Vec<usize> = plain[1..].to_vec();
    for _ in 0..SEARCH_RESTARTS {
        let mut rest = others.clone();
        rest.shuffle(&mut rng);
        // Largest entry as the constant coefficient.
        let big = (0..rest.len())
            .max_by(|&a, &b| f.v[rest[a]].norm().total_cmp(&f.v[rest[b]].norm()))
            .unwrap();
        let last = rest.len() - 1;
        rest.swap(big, last);
        let mut order = vec![k];
        order.extend(rest);
        if let Some(g) = inverse_growth(&gather(&f.v, &order), best.0) {
            best = (g, order);
        }
    }
    let budget = (SEARCH_WORK / n).clamp(16, 256);
    let (mut growth, mut order) = best;
    for _ in 0..budget {
        if growth <= GROWTH_TARGET {
            break;
        }
        let i = rng.random_range(1..n);
        let j = rng.random_range(1..n);
        if i == j {
            continue;
        }
        order.swap(i, j);
        match inverse_growth(&gather(&f.v, &order), growth) {
            Some(g) if g < growth => growth = g,
            _ => order.swap(i, j),
        }
    }
    order
}

/// Picks the column of `a` processed first, preferring column 0.
fn conditioned_first_column(a: &DenseMatrix) -> usize {
    let n = a.n();
    let threshold = PIVOT_THRESHOLD * a.max_abs();
    let first_growth = |c: usize, bound: f64| {
        let mut v = a.column(c);
        if v[0].norm() <= threshold {
            return None;
        }
        v[0] -= Scalar::new(1.0, 0.0);
        if v.iter().all(|z| *z == Scalar::new(0.0, 0.0)) {
            return Some(0.0);
        }
        inverse_growth(&v, bound)
    };
    let mut best = (f64::INFINITY, 0);
    for c in 0..n {
        if let Some(g) = first_growth(c, best.0) {
            if c == 0 && g <= GROWTH_TARGET {
                return 0;
            }
            if g < best.0 {
                best = (g, c);
            }
        }
    }
    best.1
}

struct Stage {
    pi: PermutationSpec,
    split: TriangularSplit,
}

fn split_stage(f: &ElementaryColumnFactor, recentered: RecenteredFactor) -> Result<Stage> {
    let split = triangular_split(&recentered.w).map_err(|e| match e {
        Error::SingularFactor { magnitude } => Error::NonGeneric {
            stage: f.column + 1,
            reason: "vanishing last entry of the recentered column",
            magnitude,
        },
        other => other,
    })?;
    Ok(Stage {
        pi: recentered.pi,
        split,
    })
}

/// `A = T₁T₂P₁ ⋯ T₂ₙ₋₁T₂ₙPₙ` using the default [`GeOrdering::Conditioned`].
pub fn toeplitz_permutation_decompose(a: &DenseMatrix) -> Result<FactorChain> {
    toeplitz_permutation_decompose_with(a, GeOrdering::default())
}

/// `A = T₁T₂P₁ ⋯ T₂ₙ₋₁T₂ₙPₙ` with `T₂ₖ₋₁ = W_k`, `T₂ₖ = W_k⁻¹ + E_{n1}`,
/// `P_k = Q_k⁻¹Q_{k+1}` and `Pₙ = Qₙ⁻¹C⁻¹`, where `C` is the column order.
pub fn toeplitz_permutation_decompose_with(
    a: &DenseMatrix,
    ordering: GeOrdering,
) -> Result<FactorChain> {
    let n = a.n();
    let first = match ordering {
        GeOrdering::Natural => 0,
        GeOrdering::Conditioned => conditioned_first_column(a),
    };
    let mut columns: Vec<usize> = (0..n).collect();
    columns.remove(first);
    columns.insert(0, first);
    let column_order = PermutationSpec::new(columns).expect("valid reordering");
    let reordered = column_order.right_multiply(a);

    let mut stages = Vec::with_capacity(n);
    for f in elementary_column_factorize(&reordered)? {
        let recentered = match ordering {
            GeOrdering::Natural => recenter(&f),
            GeOrdering::Conditioned => {
                let order = conditioned_order(&f);
                recenter_with(&f, PermutationSpec::new(order).expect("valid order"))
            }
        };
        stages.push(split_stage(&f, recentered)?);
    }

    let mut factors = Vec::with_capacity(3 * n);
    for (k, stage) in stages.iter().enumerate() {
        let next = stages
            .get(k + 1)
            .map(|s| s.pi.clone())
            .unwrap_or_else(|| column_order.inverse());
        factors.push(Factor::Toeplitz(stage.split.triangular.clone()));
        factors.push(Factor::Toeplitz(stage.split.completion.clone()));
        factors.push(Factor::Permutation(stage.pi.inverse().compose(&next)));
    }
    FactorChain::new(n, None, factors)
}

/// Hankel variant with the default ordering.
pub fn hankel_permutation_decompose(a: &DenseMatrix) -> Result<FactorChain> {
    hankel_permutation_decompose_with(a, GeOrdering::default())
}

/// `A = J H₁H₂P′₁ ⋯ H₂ₙ₋₁H₂ₙP′ₙ` with `J` the exchange matrix, `H_i = J·T_i`
/// for odd `i`, `H_i = T_i·J` for even `i`, `P′_k = J P_k J` for `k < n` and
/// `P′ₙ = J Pₙ`.
pub fn hankel_permutation_decompose_with(
    a: &DenseMatrix,
    ordering: GeOrdering,
) -> Result<FactorChain> {
    let n = a.n();
    let toeplitz = toeplitz_permutation_decompose_with(a, ordering)?;
    let exchange = PermutationSpec::exchange(n);
    let mut factors = Vec::with_capacity(3 * n);
    for (index, factor) in toeplitz.factors.into_iter().enumerate() {
        let stage = index / 3;
        let hankel = match (index % 3, factor) {
            (0, Factor::Toeplitz(t)) => Factor::Hankel(hankel_from_toeplitz(&t, Side::Left)),
            (1, Factor::Toeplitz(t)) => Factor::Hankel(hankel_from_toeplitz(&t, Side::Right)),
            (2, Factor::Permutation(p)) if stage + 1 < n => {
                Factor::Permutation(exchange.compose(&p).compose(&exchange))
            }
            (2, Factor::Permutation(p)) => Factor::Permutation(exchange.compose(&p)),
            _ => unreachable!("Toeplitz chain interleaving is fixed"),
        };
        factors.push(hankel);
    }
    FactorChain::new(n, Some(exchange), factors)
}
