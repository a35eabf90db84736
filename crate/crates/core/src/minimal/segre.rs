//! The two-factor problem `A = T₁T₂` as polynomial equations.
//!
//! With `z_{k,m} = x_k y_m` for the diagonals `x` of `T₁` and `y` of `T₂`
//! (`k, m ∈ −(n−1)..n−1`), entry `(i, j)` of the product is the linear form
//! `Σ_{k+m = j−i} z_{k,m}` restricted to `i + k ∈ 0..n`, and `z` is a rank-one
//! `(2n−1) × (2n−1)` array exactly when all of its 2×2 minors vanish.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::structmat::{DenseMatrix, Scalar, ToeplitzSpec};

/// `C z = d` together with quadratic forms `zᵀE_j z = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearQuadraticSystem {
    pub n: usize,
    pub num_unknowns: usize,
    /// Sparse rows of `C` as `(unknown, coefficient)` pairs; row `i·n + j`
    /// belongs to entry `(i, j)`.
    pub linear: Vec<Vec<(usize, Scalar)>>,
    pub rhs: Vec<Scalar>,
    /// Each form as `(p, q, c)` triples meaning `c · z_p · z_q`.
    pub quadratics: Vec<Vec<(usize, usize, Scalar)>>,
}

impl LinearQuadraticSystem {
    /// Index of `z_{k,m}`.
    pub fn unknown(&self, k: isize, m: isize) -> usize {
        let w = 2 * self.n as isize - 1;
        let off = self.n as isize - 1;
        ((k + off) * w + (m + off)) as usize
    }

    /// `(k, m)` of unknown `index`.
    pub fn label(&self, index: usize) -> (isize, isize) {
        let w = 2 * self.n - 1;
        let off = self.n as isize - 1;
        ((index / w) as isize - off, (index % w) as isize - off)
    }

    /// `C z`.
    pub fn evaluate_linear(&self, z: &[Scalar]) -> Vec<Scalar> {
        self.linear
            .iter()
            .map(|row| row.iter().map(|&(p, c)| c * z[p]).sum())
            .collect()
    }

    pub fn evaluate_quadratics(&self, z: &[Scalar]) -> Vec<Scalar> {
        self.quadratics
            .iter()
            .map(|form| form.iter().map(|&(p, q, c)| c * z[p] * z[q]).sum())
            .collect()
    }
}

/// `z = x ⊗ y` for a Toeplitz pair.
pub fn rank_one_point(first: &ToeplitzSpec, second: &ToeplitzSpec) -> Vec<Scalar> {
    first
        .diagonals()
        .iter()
        .flat_map(|&x| second.diagonals().iter().map(move |&y| x * y))
        .collect()
}

/// Builds the system for `A = T₁T₂`; only `r = 2` has this form.
pub fn build_linear_quadratic_system(a: &DenseMatrix, r: usize) -> Result<LinearQuadraticSystem> {
    if r != 2 {
        return Err(Error::UnsupportedArity(r));
    }
    let n = a.n();
    let w = 2 * n - 1;
    let mut sys = LinearQuadraticSystem {
        n,
        num_unknowns: w * w,
        linear: Vec::with_capacity(n * n),
        rhs: Vec::with_capacity(n * n),
        quadratics: Vec::new(),
    };
    let one = Scalar::new(1.0, 0.0);
    for i in 0..n as isize {
        for j in 0..n as isize {
            let row = (-i..n as isize - i)
                .map(|k| (sys.unknown(k, j - i - k), one))
                .collect();
            sys.linear.push(row);
            sys.rhs.push(a[(i as usize, j as usize)]);
        }
    }
    let range = -(n as isize - 1)..n as isize;
    for k in range.clone() {
        for k2 in k + 1..n as isize {
            for m in range.clone() {
                for m2 in m + 1..n as isize {
                    sys.quadratics.push(vec![
                        (sys.unknown(k, m), sys.unknown(k2, m2), one),
                        (sys.unknown(k, m2), sys.unknown(k2, m), -one),
                    ]);
                }
            }
        }
    }
    Ok(sys)
}

fn variable(sys: &LinearQuadraticSystem, index: usize) -> String {
    let part = |v: isize| {
        if v < 0 {
            format!("m{}", -v)
        } else {
            v.to_string()
        }
    };
    let (k, m) = sys.label(index);
    format!("z_{}_{}", part(k), part(m))
}

fn constant(c: Scalar) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("({:?}{sign}{:?}*I)", c.re, c.im.abs())
}

/// Appends `term` with coefficient `c`, writing unit coefficients as signs.
fn push_term(line: &mut String, c: Scalar, term: &str) {
    let first = line.is_empty();
    if c == Scalar::new(1.0, 0.0) {
        if !first {
            line.push_str(" + ");
        }
    } else if c == Scalar::new(-1.0, 0.0) {
        line.push_str(if first { "-" } else { " - " });
    } else {
        if !first {
            line.push_str(" + ");
        }
        let _ = write!(line, "{}*", constant(c));
    }
    line.push_str(term);
}

/// One polynomial per line, quadrics first and then the linear equations
/// written as `Σ z − (value)`. Output depends only on the system.
pub fn export_system(sys: &LinearQuadraticSystem) -> String {
    let mut out = String::new();
    for form in &sys.quadratics {
        let mut line = String::new();
        for &(p, q, c) in form {
            push_term(
                &mut line,
                c,
                &format!("{}*{}", variable(sys, p), variable(sys, q)),
            );
        }
        out.push_str(&line);
        out.push('\n');
    }
    for (row, &d) in sys.linear.iter().zip(&sys.rhs) {
        let mut line = String::new();
        for &(p, c) in row {
            push_term(&mut line, c, &variable(sys, p));
        }
        let _ = write!(line, " - {}", constant(d));
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Polynomial counts of an exported system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExportSummary {
    pub linear: usize,
    pub quadratic: usize,
}

/// Reads back an export and classifies each polynomial by degree.
pub fn parse_export(text: &str) -> Result<ExportSummary> {
    let mut summary = ExportSummary {
        linear: 0,
        quadratic: 0,
    };
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let degree = line
            .split([' ', '+', '-'])
            .filter(|term| term.contains("z_"))
            .map(|term| term.matches("z_").count())
            .max()
            .unwrap_or(0);
        match degree {
            1 => summary.linear += 1,
            2 => summary.quadratic += 1,
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("unexpected polynomial degree {degree}"),
                })
            }
        }
    }
    Ok(summary)
}
