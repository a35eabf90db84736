//! Levenberg–Marquardt on `F(τ) = vec(ρ_r(τ)) − vec(A/‖A‖_F)` over complex
//! coordinates.
//!
//! Since `F` is holomorphic in the coordinates, the real least-squares step
//! in the split (real, imaginary) unknowns coincides with the complex step
//! `δ = −Jᴴ(JJᴴ + λI)⁻¹F`. That form is used whenever `n² ≤ r(2n−1)`, which
//! also makes the step minimum-norm along the scaling gauge directions.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::tuple::{certificate_point, jacobian, minimal_factor_count, product, FactorKind};
use crate::error::{Error, Result};
use crate::gen::{complex_normal_vec, derive_seed, rng_from_seed};
use crate::structmat::{DenseMatrix, HankelSpec, Scalar, ToeplitzSpec};

use super::tuple::ToeplitzTuple;

#[derive(Clone, Debug, PartialEq)]
pub struct GaussNewtonConfig {
    pub max_iterations: usize,
    /// Relative Frobenius residual accepted as converged.
    pub residual_tolerance: f64,
    pub max_restarts: usize,
    pub seed: u64,
    pub initial_damping: f64,
    pub damping_increase: f64,
    pub damping_decrease: f64,
    /// Stop a restart once `‖δ‖ ≤ step_tolerance · (‖τ‖ + step_tolerance)`.
    pub step_tolerance: f64,
}

impl Default for GaussNewtonConfig {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            residual_tolerance: 1e-10,
            max_restarts: 20,
            seed: 0,
            initial_damping: 1e-3,
            damping_increase: 10.0,
            damping_decrease: 0.1,
            step_tolerance: 1e-14,
        }
    }
}

impl GaussNewtonConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("residual_tolerance", self.residual_tolerance),
            ("initial_damping", self.initial_damping),
            ("damping_increase", self.damping_increase),
            ("damping_decrease", self.damping_decrease),
            ("step_tolerance", self.step_tolerance),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidConfig(format!("{name} must be positive")));
        }
        if self.residual_tolerance < 100.0 * f64::EPSILON {
            return Err(Error::InvalidConfig(
                "residual_tolerance below 100 machine epsilons".into(),
            ));
        }
        if self.max_iterations == 0 || self.max_restarts == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations and max_restarts must be positive".into(),
            ));
        }
        if self.damping_increase <= 1.0 || self.damping_decrease >= 1.0 {
            return Err(Error::InvalidConfig(
                "damping must grow on rejection and shrink on acceptance".into(),
            ));
        }
        Ok(())
    }
}

/// Statistics of a successful solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveStats {
    pub residual: f64,
    /// Restarts used, counting the successful one.
    pub restarts: usize,
    /// Iterations of the successful restart.
    pub iterations: usize,
    /// `r` was below `⌊n/2⌋ + 1`, where success is not expected.
    pub below_minimal: bool,
}

#[derive(Clone, Debug)]
pub struct ToeplitzSolution {
    pub tuple: ToeplitzTuple,
    pub stats: SolveStats,
}

#[derive(Clone, Debug)]
pub struct HankelSolution {
    pub factors: Vec<HankelSpec>,
    pub stats: SolveStats,
}

/// Finds `T₁⋯T_r = A`.
pub fn gauss_newton_decompose(
    a: &DenseMatrix,
    r: usize,
    cfg: &GaussNewtonConfig,
) -> Result<ToeplitzSolution> {
    let n = a.n();
    let (coords, stats) = solve(FactorKind::Toeplitz, a, r, cfg)?;
    let factors = coords
        .chunks(2 * n - 1)
        .map(|c| ToeplitzSpec::new(n, c.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ToeplitzSolution {
        tuple: ToeplitzTuple::new(factors)?,
        stats,
    })
}

/// Finds `H₁⋯H_r = A` with Hankel factors.
pub fn gauss_newton_hankel_decompose(
    a: &DenseMatrix,
    r: usize,
    cfg: &GaussNewtonConfig,
) -> Result<HankelSolution> {
    let n = a.n();
    let (coords, stats) = solve(FactorKind::Hankel, a, r, cfg)?;
    let factors = coords
        .chunks(2 * n - 1)
        .map(|c| HankelSpec::new(n, c.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(HankelSolution { factors, stats })
}

fn solve(
    kind: FactorKind,
    a: &DenseMatrix,
    r: usize,
    cfg: &GaussNewtonConfig,
) -> Result<(Vec<Scalar>, SolveStats)> {
    cfg.validate()?;
    if r == 0 {
        return Err(Error::InvalidConfig("need at least one factor".into()));
    }
    let n = a.n();
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        let coords = vec![Scalar::new(0.0, 0.0); r * (2 * n - 1)];
        return Ok((
            coords,
            SolveStats {
                residual: 0.0,
                restarts: 1,
                iterations: 0,
                below_minimal: r < minimal_factor_count(n),
            },
        ));
    }
    let target: Vec<Scalar> = a.as_slice().iter().map(|z| z / scale).collect();

    let mut best = f64::INFINITY;
    for restart in 0..cfg.max_restarts {
        let mut rng = rng_from_seed(derive_seed(cfg.seed, restart as u64));
        let start = initial_point(kind, n, r, restart, &mut rng);
        let run = levenberg_marquardt(kind, n, &target, start, cfg);
        best = best.min(run.residual);
        if run.residual <= cfg.residual_tolerance {
            let mut coords = run.coords;
            // Undo the normalization on the first factor.
            let m = 2 * n - 1;
            for z in &mut coords[..m] {
                *z *= scale;
            }
            // Independent check on the returned factors.
            let residual = product(kind, n, &coords).relative_residual(a)?;
            if residual <= cfg.residual_tolerance {
                return Ok((
                    coords,
                    SolveStats {
                        residual,
                        restarts: restart + 1,
                        iterations: run.iterations,
                        below_minimal: r < minimal_factor_count(n),
                    },
                ));
            }
            best = best.min(residual);
        }
    }
    Err(Error::NoConvergence {
        restarts: cfg.max_restarts,
        best_residual: best,
    })
}

fn initial_point<R: Rng>(
    kind: FactorKind,
    n: usize,
    r: usize,
    restart: usize,
    rng: &mut R,
) -> Vec<Scalar> {
    let m = 2 * n - 1;
    if restart == 0 && kind == FactorKind::Toeplitz && r <= n {
        // Near the certificate point the Jacobian has full rank.
        let t: Vec<Scalar> = complex_normal_vec(rng, r)
            .into_iter()
            .map(|z| z * 0.3)
            .collect();
        let mut coords = certificate_point(n, &t).expect("r ≤ n").coordinates();
        for z in &mut coords {
            *z += crate::gen::complex_normal(rng) * 1e-2;
        }
        return coords;
    }
    let mut coords = complex_normal_vec(rng, r * m);
    let norm = product(kind, n, &coords).frobenius_norm();
    if norm > 0.0 && norm.is_finite() {
        let per_factor = norm.powf(-1.0 / r as f64);
        for z in &mut coords {
            *z *= per_factor;
        }
    }
    coords
}

struct Run {
    coords: Vec<Scalar>,
    residual: f64,
    iterations: usize,
}

fn residual_vector(
    kind: FactorKind,
    n: usize,
    coords: &[Scalar],
    target: &[Scalar],
) -> Vec<Scalar> {
    product(kind, n, coords)
        .as_slice()
        .iter()
        .zip(target)
        .map(|(p, t)| p - t)
        .collect()
}

fn norm(v: &[Scalar]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn levenberg_marquardt(
    kind: FactorKind,
    n: usize,
    target: &[Scalar],
    mut coords: Vec<Scalar>,
    cfg: &GaussNewtonConfig,
) -> Run {
    let mut f = residual_vector(kind, n, &coords, target);
    let mut cost = norm(&f);
    let mut lambda = cfg.initial_damping;
    let mut iterations = 0;
    while iterations < cfg.max_iterations && cost > cfg.residual_tolerance {
        iterations += 1;
        let jac = jacobian(kind, n, &coords).to_nalgebra();
        let Some(step) = damped_step(&jac, &f, lambda) else {
            lambda *= cfg.damping_increase;
            continue;
        };
        let step_norm = norm(&step);
        let trial: Vec<Scalar> = coords.iter().zip(&step).map(|(x, d)| x + d).collect();
        let trial_f = residual_vector(kind, n, &trial, target);
        let trial_cost = norm(&trial_f);
        if trial_cost.is_finite() && trial_cost < cost {
            coords = trial;
            f = trial_f;
            cost = trial_cost;
            lambda = (lambda * cfg.damping_decrease).max(1e-15);
        } else {
            lambda *= cfg.damping_increase;
            if lambda > 1e12 {
                break;
            }
        }
        if step_norm <= cfg.step_tolerance * (norm(&coords) + cfg.step_tolerance) {
            break;
        }
    }
    Run {
        coords,
        residual: cost,
        iterations,
    }
}

/// `δ = −Jᴴ(JJᴴ + λI)⁻¹F` (or the normal-equation form when `J` is tall).
fn damped_step(jac: &DMatrix<Scalar>, f: &[Scalar], lambda: f64) -> Option<Vec<Scalar>> {
    let (rows, cols) = jac.shape();
    let f = DVector::from_column_slice(f);
    let jh = jac.adjoint();
    let step = if rows <= cols {
        let mut gram = jac * &jh;
        for i in 0..rows {
            gram[(i, i)] += Scalar::new(lambda, 0.0);
        }
        let y = gram.cholesky()?.solve(&f);
        -(jh * y)
    } else {
        let mut gram = &jh * jac;
        for i in 0..cols {
            gram[(i, i)] += Scalar::new(lambda, 0.0);
        }
        -gram.cholesky()?.solve(&(jh * f))
    };
    step.iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
        .then(|| step.as_slice().to_vec())
}
