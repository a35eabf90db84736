//! The `toepfact` command line.
//!
//! Exit codes: 0 success, 1 result outside tolerance, 2 non-generic input,
//! 3 no convergence, 4 usage, parse or I/O failure.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::ge::{
    hankel_permutation_decompose_with, toeplitz_permutation_decompose_with, GeOrdering,
};
use crate::gen::{
    derive_seed, random_centrosymmetric, random_circulant, random_dense, random_hankel,
    random_toeplitz, rng_from_seed,
};
use crate::guards::decomposability_screen;
use crate::io::{parse_matrix, serialize_matrix, ChainFile};
use crate::minimal::{
    build_linear_quadratic_system, closed_form_2x2, export_system, gauss_newton_decompose,
    gauss_newton_hankel_decompose, minimal_factor_count, rank_certificate, GaussNewtonConfig,
};
use crate::structmat::{
    dense_product, toeplitz_matvec, DenseMatrix, Factor, FactorChain, Scalar, DEFAULT_TOLERANCE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_NON_GENERIC: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

/// Attempts made by `--precondition-retry`.
const PRECONDITION_ATTEMPTS: u64 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "toepfact",
    version,
    about = "Toeplitz and Hankel matrix decompositions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded random matrix.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GenKind::Generic)]
        kind: GenKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factor a matrix into Toeplitz or Hankel factors.
    Decompose {
        /// Matrix file, or `-` for standard input.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Ge)]
        method: Method,
        #[arg(long, value_enum, default_value_t = FactorKindArg::Toeplitz)]
        kind: FactorKindArg,
        /// Factor count for gauss-newton (default ⌊n/2⌋ + 1).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OrderingArg::Conditioned)]
        ordering: OrderingArg,
        /// For ge: on a vanishing pivot factor `A·R⁻¹` instead, with `R` a
        /// seeded random factor appended to the chain.
        #[arg(long)]
        precondition_retry: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiply out a chain and compare it with a matrix.
    Verify {
        matrix: PathBuf,
        chain: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Rank of the product-map Jacobian at a seeded certificate point.
    RankCert {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Export the bilinear equations of a two-factor decomposition.
    ExportLq {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the decompositions and the fast matrix-vector product.
    Bench {
        #[arg(long, default_value_t = 512)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Report which restricted factor classes cannot produce a matrix.
    Screen {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Generic,
    Toeplitz,
    Hankel,
    Circulant,
    Centrosym,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ge,
    GaussNewton,
    #[value(name = "closed-form2")]
    ClosedForm2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FactorKindArg {
    Toeplitz,
    Hankel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    Natural,
    Conditioned,
}

impl From<OrderingArg> for GeOrdering {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::Natural => GeOrdering::Natural,
            OrderingArg::Conditioned => GeOrdering::Conditioned,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonGeneric { .. } | Error::SingularFactor { .. } => EXIT_NON_GENERIC,
        Error::NoConvergence { .. } | Error::DegenerateParameters { .. } => EXIT_NO_CONVERGENCE,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", path.display()),
            ))
        })
    }
}

/// Sends `payload` to `--out` (reporting on `out`) or to `out` (reporting on `err`).
fn emit(
    payload: &str,
    path: Option<&Path>,
    report: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, payload)?;
            out.write_all(report.as_bytes())?;
        }
        None => {
            out.write_all(payload.as_bytes())?;
            err.write_all(report.as_bytes())?;
        }
    }
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Gen {
            n,
            seed,
            kind,
            out: path,
        } => {
            let a = generate(n, seed, kind)?;
            emit(&serialize_matrix(&a), path.as_deref(), "", out, err)?;
            Ok(EXIT_OK)
        }
        Command::Decompose {
            input,
            method,
            kind,
            r,
            seed,
            tol,
            ordering,
            precondition_retry,
            out: path,
        } => {
            let a = parse_matrix(&read_input(&input)?)?;
            let file = decompose(
                &a,
                method,
                kind,
                r,
                seed,
                tol,
                ordering.into(),
                precondition_retry,
            )?;
            let residual: f64 = file
                .meta("residual")
                .and_then(|r| r.parse().ok())
                .unwrap_or(f64::NAN);
            let pass = residual <= tol;
            let report = format!(
                "residual {residual:e}\nstatus {}\n",
                if pass { "pass" } else { "fail" }
            );
            emit(&file.serialize(), path.as_deref(), &report, out, err)?;
            Ok(if pass { EXIT_OK } else { EXIT_TOLERANCE })
        }
        Command::Verify { matrix, chain, tol } => {
            let a = parse_matrix(&read_input(&matrix)?)?;
            let file = ChainFile::parse(&read_input(&chain)?)?;
            if file.chain.n() != a.n() {
                return Err(Error::DimensionMismatch {
                    expected: a.n(),
                    got: file.chain.n(),
                });
            }
            let residual = dense_product(&file.chain)?.relative_residual(&a)?;
            let pass = residual <= tol;
            writeln!(out, "residual {residual:e}")?;
            writeln!(out, "residual_kind {}", residual_kind(&a))?;
            writeln!(out, "status {}", if pass { "pass" } else { "fail" })?;
            Ok(if pass { EXIT_OK } else { EXIT_TOLERANCE })
        }
        Command::RankCert { n, seed } => {
            let report = rank_certificate(n, seed)?;
            writeln!(out, "n {}", report.n)?;
            writeln!(out, "r {}", report.r)?;
            writeln!(out, "rank {}", report.rank)?;
            writeln!(out, "required {}", report.required_rank)?;
            writeln!(out, "sharp {}", report.sharp)?;
            writeln!(out, "status {}", if report.pass { "pass" } else { "fail" })?;
            Ok(if report.pass { EXIT_OK } else { EXIT_TOLERANCE })
        }
        Command::ExportLq { input, out: path } => {
            let a = parse_matrix(&read_input(&input)?)?;
            let sys = build_linear_quadratic_system(&a, 2)?;
            let report = format!(
                "{} quadratic, {} linear\n",
                sys.quadratics.len(),
                sys.linear.len()
            );
            emit(&export_system(&sys), path.as_deref(), &report, out, err)?;
            Ok(EXIT_OK)
        }
        Command::Bench { max_n, seed } => {
            if max_n < 64 {
                return Err(Error::InvalidConfig("bench needs --max-n ≥ 64".into()));
            }
            bench(max_n, seed, out)?;
            Ok(EXIT_OK)
        }
        Command::Screen { input, tol } => {
            let a = parse_matrix(&read_input(&input)?)?;
            let report = decomposability_screen(&a, tol);
            writeln!(
                out,
                "centrosymmetric {} {:e}",
                report.centrosymmetric.holds, report.centrosymmetric.deviation
            )?;
            writeln!(out, "allones_residual {:e}", report.allones_eigvec_residual)?;
            writeln!(out, "allones_zero_image {}", report.allones_zero_image)?;
            writeln!(
                out,
                "symmetric_toeplitz {} {:e}",
                report.symmetric_toeplitz.holds, report.symmetric_toeplitz.deviation
            )?;
            writeln!(
                out,
                "persymmetric_hankel {} {:e}",
                report.persymmetric_hankel.holds, report.persymmetric_hankel.deviation
            )?;
            writeln!(
                out,
                "circulant {} {:e}",
                report.circulant.holds, report.circulant.deviation
            )?;
            let ruled = report.ruled_out();
            writeln!(
                out,
                "ruled_out {}",
                if ruled.is_empty() {
                    "none".to_string()
                } else {
                    ruled.join(",")
                }
            )?;
            Ok(EXIT_OK)
        }
    }
}

pub fn generate(n: usize, seed: u64, kind: GenKind) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidConfig("n must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    Ok(match kind {
        GenKind::Generic => random_dense(&mut rng, n),
        GenKind::Toeplitz => random_toeplitz(&mut rng, n).densify(),
        GenKind::Hankel => random_hankel(&mut rng, n).densify(),
        GenKind::Circulant => random_circulant(&mut rng, n).densify(),
        GenKind::Centrosym => random_centrosymmetric(&mut rng, n),
    })
}

fn residual_kind(a: &DenseMatrix) -> &'static str {
    if a.frobenius_norm() == 0.0 {
        "absolute"
    } else {
        "relative"
    }
}

/// Runs one decomposition and returns the chain with its metadata.
#[allow(clippy::too_many_arguments)]
pub fn decompose(
    a: &DenseMatrix,
    method: Method,
    kind: FactorKindArg,
    r: Option<usize>,
    seed: u64,
    tol: f64,
    ordering: GeOrdering,
    precondition_retry: bool,
) -> Result<ChainFile> {
    let n = a.n();
    let kind_name = match kind {
        FactorKindArg::Toeplitz => "toeplitz",
        FactorKindArg::Hankel => "hankel",
    };
    let mut meta: Vec<(&str, String)> = Vec::new();
    let chain = match method {
        Method::Ge => {
            if r.is_some() {
                return Err(Error::InvalidConfig(
                    "--r applies to gauss-newton only".into(),
                ));
            }
            meta.push(("ordering", format!("{ordering:?}").to_lowercase()));
            match ge_chain(a, kind, ordering) {
                Err(e @ Error::NonGeneric { .. }) if precondition_retry => {
                    let (chain, attempt) = preconditioned_ge(a, kind, ordering, seed).ok_or(e)?;
                    meta.push(("preconditioned", attempt.to_string()));
                    chain
                }
                other => other?,
            }
        }
        Method::GaussNewton => {
            let r = r.unwrap_or_else(|| minimal_factor_count(n));
            let cfg = GaussNewtonConfig {
                seed,
                residual_tolerance: tol.max(100.0 * f64::EPSILON),
                ..Default::default()
            };
            let (factors, stats) = match kind {
                FactorKindArg::Toeplitz => {
                    let sol = gauss_newton_decompose(a, r, &cfg)?;
                    let f = sol
                        .tuple
                        .into_factors()
                        .into_iter()
                        .map(Factor::Toeplitz)
                        .collect();
                    (f, sol.stats)
                }
                FactorKindArg::Hankel => {
                    let sol = gauss_newton_hankel_decompose(a, r, &cfg)?;
                    (
                        sol.factors.into_iter().map(Factor::Hankel).collect(),
                        sol.stats,
                    )
                }
            };
            meta.push(("r", r.to_string()));
            meta.push(("restarts", stats.restarts.to_string()));
            meta.push(("iterations", stats.iterations.to_string()));
            FactorChain::new(n, None, factors)?
        }
        Method::ClosedForm2 => {
            if n != 2 || kind != FactorKindArg::Toeplitz {
                return Err(Error::InvalidConfig(
                    "closed-form2 needs a 2×2 matrix and --kind toeplitz".into(),
                ));
            }
            let tuple = closed_form_2x2(a, seed)?;
            let factors = tuple
                .into_factors()
                .into_iter()
                .map(Factor::Toeplitz)
                .collect();
            FactorChain::new(n, None, factors)?
        }
    };
    let residual = dense_product(&chain)?.relative_residual(a)?;
    let method_name = match method {
        Method::Ge => "ge",
        Method::GaussNewton => "gauss-newton",
        Method::ClosedForm2 => "closed-form2",
    };
    let mut file = ChainFile::new(chain)
        .with_meta("method", method_name)
        .with_meta("kind", kind_name)
        .with_meta("seed", seed);
    for (key, value) in meta {
        file = file.with_meta(key, value);
    }
    Ok(file
        .with_meta("residual", format!("{residual:e}"))
        .with_meta("residual_kind", residual_kind(a)))
}

fn ge_chain(a: &DenseMatrix, kind: FactorKindArg, ordering: GeOrdering) -> Result<FactorChain> {
    match kind {
        FactorKindArg::Toeplitz => toeplitz_permutation_decompose_with(a, ordering),
        FactorKindArg::Hankel => hankel_permutation_decompose_with(a, ordering),
    }
}

/// `A = (A·R⁻¹)·R` for a seeded random `R` of the requested kind. Returns the
/// chain and the attempt that succeeded.
fn preconditioned_ge(
    a: &DenseMatrix,
    kind: FactorKindArg,
    ordering: GeOrdering,
    seed: u64,
) -> Option<(FactorChain, u64)> {
    let n = a.n();
    for attempt in 1..=PRECONDITION_ATTEMPTS {
        let mut rng = rng_from_seed(derive_seed(seed, attempt));
        let factor = match kind {
            FactorKindArg::Toeplitz => Factor::Toeplitz(random_toeplitz(&mut rng, n)),
            FactorKindArg::Hankel => Factor::Hankel(random_hankel(&mut rng, n)),
        };
        let Some(shifted) = right_divide(a, &factor.densify()) else {
            continue;
        };
        if let Ok(mut chain) = ge_chain(&shifted, kind, ordering) {
            chain.factors.push(factor);
            return Some((chain, attempt));
        }
    }
    None
}

/// `A·R⁻¹`, or `None` when `R` is numerically singular.
fn right_divide(a: &DenseMatrix, r: &DenseMatrix) -> Option<DenseMatrix> {
    let n = a.n();
    // Solve Rᵀ Xᵀ = Aᵀ.
    let rt = DMatrix::from_fn(n, n, |i, j| r[(j, i)]);
    let at = DMatrix::from_fn(n, n, |i, j| a[(j, i)]);
    let xt = rt.lu().solve(&at)?;
    DenseMatrix::new(n, (0..n * n).map(|k| xt[(k % n, k / n)]).collect()).ok()
}

fn bench(max_n: usize, seed: u64, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "method\tn\tseconds\tresidual")?;
    for n in [64, 128, 256, 512].into_iter().filter(|&n| n <= max_n) {
        let a = random_dense(&mut rng_from_seed(derive_seed(seed, n as u64)), n);
        let start = Instant::now();
        let result = toeplitz_permutation_decompose_with(&a, GeOrdering::Conditioned);
        let seconds = start.elapsed().as_secs_f64();
        let residual = result
            .ok()
            .and_then(|c| dense_product(&c).ok())
            .and_then(|p| p.relative_residual(&a).ok())
            .unwrap_or(f64::NAN);
        writeln!(out, "ge\t{n}\t{seconds:.6}\t{residual:e}")?;
    }
    for n in 2..=8 {
        let a = random_dense(&mut rng_from_seed(derive_seed(seed, 1000 + n as u64)), n);
        let cfg = GaussNewtonConfig {
            seed,
            ..Default::default()
        };
        let start = Instant::now();
        let result = gauss_newton_decompose(&a, minimal_factor_count(n), &cfg);
        let seconds = start.elapsed().as_secs_f64();
        let residual = result.map(|s| s.stats.residual).unwrap_or(f64::NAN);
        writeln!(out, "gauss-newton\t{n}\t{seconds:.6}\t{residual:e}")?;
    }
    let (fft, dense) = time_matvec(4096, seed);
    writeln!(out, "matvec-fft\t4096\t{fft:.6}\t-")?;
    writeln!(out, "matvec-dense\t4096\t{dense:.6}\t-")?;
    Ok(())
}

/// Seconds per product for the FFT and dense Toeplitz matrix-vector products.
pub fn time_matvec(n: usize, seed: u64) -> (f64, f64) {
    let mut rng = rng_from_seed(seed);
    let t = random_toeplitz(&mut rng, n);
    let x: Vec<Scalar> = crate::gen::complex_normal_vec(&mut rng, n);
    let dense = t.densify();
    let reps = 5;
    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(toeplitz_matvec(&t, &x).expect("matching sizes"));
    }
    let fft = start.elapsed().as_secs_f64() / reps as f64;
    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(dense.mul_vec(&x).expect("matching sizes"));
    }
    (fft, start.elapsed().as_secs_f64() / reps as f64)
}
