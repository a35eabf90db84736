//! Text formats for matrices and factor chains.
//!
//! Matrix file:
//!
//! ```text
//! toepfact-matrix v1 2 2
//! 1.5 2-0.25i
//! 0 -1i
//! ```
//!
//! Chain file (Toeplitz values from diagonal `−(n−1)` up to `n−1`, Hankel
//! values by anti-diagonal `i + j = 0..2n−2`, permutations as one-based
//! images `P·e_i = e_{p_i}`):
//!
//! ```text
//! toepfact-chain v1 2
//! meta method ge
//! leading 2 1
//! toeplitz 0 1 0
//! permutation 2 1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Serialization writes
//! 17 significant digits so every `f64` survives a round trip.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::structmat::{
    DenseMatrix, Factor, FactorChain, HankelSpec, PermutationSpec, Scalar, ToeplitzSpec,
};

const MATRIX_MAGIC: &str = "toepfact-matrix";
const CHAIN_MAGIC: &str = "toepfact-chain";
const VERSION: &str = "v1";

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// `re` when the imaginary part is zero, otherwise `re±imi`.
pub fn format_scalar(z: Scalar) -> String {
    if z.im == 0.0 {
        format_real(z.re)
    } else {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        format!("{}{sign}{}i", format_real(z.re), format_real(z.im.abs()))
    }
}

fn parse_real(text: &str) -> Option<f64> {
    let x: f64 = text.parse().ok()?;
    x.is_finite().then_some(x)
}

/// Accepts `re`, `re±imi`, `imi` and `±i`.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let Some(body) = text.strip_suffix(['i', 'I']) else {
        return parse_real(text).map(|re| Scalar::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let imag = |s: &str| match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_real(s),
    };
    match split {
        Some(p) => Some(Scalar::new(parse_real(&body[..p])?, imag(&body[p..])?)),
        None => Some(Scalar::new(0.0, imag(body)?)),
    }
}

/// Non-empty, non-comment lines with their one-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_scalars<'a>(line: usize, fields: impl Iterator<Item = &'a str>) -> Result<Vec<Scalar>> {
    fields
        .map(|f| parse_scalar(f).ok_or_else(|| parse_error(line, format!("bad number {f:?}"))))
        .collect()
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    magic: &str,
) -> Result<(usize, Vec<&'a str>)> {
    let (line, header) = lines.next().ok_or_else(|| parse_error(1, "empty input"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.first() != Some(&magic) || fields.get(1) != Some(&VERSION) {
        return Err(parse_error(
            line,
            format!("expected header \"{magic} {VERSION} …\""),
        ));
    }
    Ok((line, fields[2..].to_vec()))
}

fn parse_dim(line: usize, field: Option<&&str>) -> Result<usize> {
    field
        .and_then(|f| f.parse().ok())
        .filter(|&n: &usize| n > 0)
        .ok_or_else(|| parse_error(line, "missing or invalid dimension"))
}

pub fn serialize_matrix(a: &DenseMatrix) -> String {
    let n = a.n();
    let mut out = format!("{MATRIX_MAGIC} {VERSION} {n} {n}\n");
    for i in 0..n {
        let row: Vec<String> = a.row(i).iter().map(|&z| format_scalar(z)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = content_lines(text);
    let (line, dims) = parse_header(&mut lines, MATRIX_MAGIC)?;
    let rows = parse_dim(line, dims.first())?;
    let cols = parse_dim(line, dims.get(1))?;
    if rows != cols {
        return Err(parse_error(
            line,
            format!("matrix must be square, got {rows}×{cols}"),
        ));
    }
    let n = rows;
    let mut data = Vec::with_capacity(n * n);
    let mut count = 0;
    for (line, content) in lines {
        count += 1;
        if count > n {
            return Err(parse_error(line, format!("more than {n} rows")));
        }
        let row = parse_scalars(line, content.split_whitespace())?;
        if row.len() != n {
            return Err(parse_error(
                line,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        data.extend(row);
    }
    if count != n {
        return Err(parse_error(
            line + count,
            format!("expected {n} rows, found {count}"),
        ));
    }
    DenseMatrix::new(n, data)
}

/// A factor chain with ordered `key value` metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainFile {
    pub chain: FactorChain,
    pub metadata: Vec<(String, String)>,
}

impl ChainFile {
    pub fn new(chain: FactorChain) -> Self {
        Self {
            chain,
            metadata: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("{CHAIN_MAGIC} {VERSION} {}\n", self.chain.n());
        for (key, value) in &self.metadata {
            let _ = writeln!(out, "meta {key} {value}");
        }
        let join = |values: &[Scalar]| {
            values
                .iter()
                .map(|&z| format_scalar(z))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let images = |p: &PermutationSpec| {
            p.one_based()
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        if let Some(p) = &self.chain.leading_permutation {
            let _ = writeln!(out, "leading {}", images(p));
        }
        for factor in &self.chain.factors {
            let body = match factor {
                Factor::Toeplitz(t) => join(t.diagonals()),
                Factor::Hankel(h) => join(h.antidiagonals()),
                Factor::Permutation(p) => images(p),
            };
            let _ = writeln!(out, "{} {body}", factor.tag());
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (header_line, dims) = parse_header(&mut lines, CHAIN_MAGIC)?;
        let n = parse_dim(header_line, dims.first())?;
        let mut metadata = Vec::new();
        let mut leading = None;
        let mut factors = Vec::new();
        for (line, content) in lines {
            let (tag, rest) = content
                .split_once(char::is_whitespace)
                .unwrap_or((content, ""));
            let fields = rest.split_whitespace();
            let wrap = |e: Error| match e {
                Error::Parse { .. } => e,
                other => parse_error(line, other.to_string()),
            };
            match tag {
                "meta" => {
                    let (key, value) = rest
                        .trim()
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| parse_error(line, "meta needs a key and a value"))?;
                    metadata.push((key.to_string(), value.trim().to_string()));
                }
                "leading" | "permutation" => {
                    if tag == "leading" && (leading.is_some() || !factors.is_empty()) {
                        return Err(parse_error(
                            line,
                            "leading permutation must precede factors",
                        ));
                    }
                    let images = fields
                        .map(|f| f.parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| parse_error(line, "bad permutation image"))?;
                    let p = PermutationSpec::from_one_based(&images).map_err(wrap)?;
                    if p.n() != n {
                        return Err(parse_error(
                            line,
                            format!("expected {n} images, found {}", p.n()),
                        ));
                    }
                    if tag == "leading" {
                        leading = Some(p);
                    } else {
                        factors.push(Factor::Permutation(p));
                    }
                }
                "toeplitz" => {
                    let values = parse_scalars(line, fields)?;
                    factors.push(Factor::Toeplitz(
                        ToeplitzSpec::new(n, values).map_err(wrap)?,
                    ));
                }
                "hankel" => {
                    let values = parse_scalars(line, fields)?;
                    factors.push(Factor::Hankel(HankelSpec::new(n, values).map_err(wrap)?));
                }
                other => return Err(parse_error(line, format!("unknown entry {other:?}"))),
            }
        }
        let chain = FactorChain::new(n, leading, factors)
            .map_err(|e| parse_error(header_line, e.to_string()))?;
        Ok(Self { chain, metadata })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_dense, rng_from_seed};

    #[test]
    fn scalar_literals() {
        assert_eq!(parse_scalar("1.5"), Some(Scalar::new(1.5, 0.0)));
        assert_eq!(parse_scalar("2-0.25i"), Some(Scalar::new(2.0, -0.25)));
        assert_eq!(parse_scalar("-1e-3+2E+1i"), Some(Scalar::new(-1e-3, 20.0)));
        assert_eq!(parse_scalar("-i"), Some(Scalar::new(0.0, -1.0)));
        assert_eq!(parse_scalar("3i"), Some(Scalar::new(0.0, 3.0)));
        assert_eq!(parse_scalar("nan"), None);
        assert_eq!(parse_scalar("1+xi"), None);
    }

    #[test]
    fn matrix_round_trip_is_exact() {
        let a = random_dense(&mut rng_from_seed(5), 4);
        let text = serialize_matrix(&a);
        let back = parse_matrix(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(serialize_matrix(&back), text);
    }

    #[test]
    fn matrix_errors_carry_line_numbers() {
        let err = parse_matrix("toepfact-matrix v1 2 2\n1 2\n3 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(matches!(
            parse_matrix("toepfact-matrix v1 2 3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_matrix("toepfact-matrix v1 2 2\n1 2\n").is_err());
        assert!(parse_matrix("matrix 2 2\n").is_err());
    }

    #[test]
    fn chain_round_trip() {
        let chain = FactorChain::new(
            2,
            Some(PermutationSpec::exchange(2)),
            vec![
                Factor::Toeplitz(ToeplitzSpec::identity(2)),
                Factor::Hankel(HankelSpec::exchange(2)),
                Factor::Permutation(PermutationSpec::transposition(2, 0, 1)),
            ],
        )
        .unwrap();
        let file = ChainFile::new(chain)
            .with_meta("method", "ge")
            .with_meta("seed", 3);
        let text = file.serialize();
        let back = ChainFile::parse(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.serialize(), text);
        assert_eq!(back.meta("seed"), Some("3"));
    }

    #[test]
    fn chain_rejects_wrong_lengths() {
        let err = ChainFile::parse("toepfact-chain v1 2\ntoeplitz 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(ChainFile::parse("toepfact-chain v1 2\npermutation 1 1\n").is_err());
        assert!(ChainFile::parse("toepfact-chain v1 2\nwidget 1\n").is_err());
    }
}
