//! Plain-text state files.
//!
//! ```text
//! pure N
//! re im          (2^N lines)
//! ```
//! or
//! ```text
//! mixed N
//! re,im re,im …  (2^N lines of 2^N entries)
//! ```
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex;

use crate::error::{BellError, Result};
use crate::scalar::Scalar;

use super::{ComplexMatrix, QuantumState, StateKind};

fn perr(line: usize, msg: impl Into<String>) -> BellError {
    BellError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_real<T: Scalar>(tok: &str, line: usize) -> Result<T> {
    let v: f64 = tok
        .parse()
        .map_err(|_| perr(line, format!("not a number: {tok:?}")))?;
    if !v.is_finite() {
        return Err(perr(line, format!("non-finite value {tok:?}")));
    }
    Ok(T::lit(v))
}

pub fn parse_state<T: Scalar>(text: &str) -> Result<QuantumState<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty state file"))?;
    let mut head = header.split_whitespace();
    let kind = head.next().unwrap_or_default();
    let n: usize = head
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| perr(hl, "expected \"pure N\" or \"mixed N\""))?;
    if head.next().is_some() || n == 0 || n > 12 {
        return Err(perr(
            hl,
            "expected \"pure N\" or \"mixed N\" with 1 ≤ N ≤ 12",
        ));
    }
    let dim = 1usize << n;
    let body: Vec<(usize, &str)> = lines.collect();
    if body.len() != dim {
        return Err(perr(
            hl,
            format!("expected {dim} rows, found {}", body.len()),
        ));
    }
    match kind {
        "pure" => {
            let amps = body
                .iter()
                .map(|&(ln, l)| {
                    let toks: Vec<&str> = l.split_whitespace().collect();
                    if toks.len() != 2 {
                        return Err(perr(ln, "expected \"re im\""));
                    }
                    Ok(Complex::new(
                        parse_real(toks[0], ln)?,
                        parse_real(toks[1], ln)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            QuantumState::pure(n, amps)
        }
        "mixed" => {
            let mut data = Vec::with_capacity(dim * dim);
            for &(ln, l) in &body {
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != dim {
                    return Err(perr(ln, format!("expected {dim} entries")));
                }
                for t in toks {
                    let (re, im) = t
                        .split_once(',')
                        .ok_or_else(|| perr(ln, format!("expected \"re,im\", got {t:?}")))?;
                    data.push(Complex::new(parse_real(re, ln)?, parse_real(im, ln)?));
                }
            }
            QuantumState::mixed(n, ComplexMatrix::from_vec(dim, data)?)
        }
        other => Err(perr(hl, format!("unknown state kind {other:?}"))),
    }
}

pub fn read_state<T: Scalar>(path: &Path) -> Result<QuantumState<T>> {
    parse_state(&std::fs::read_to_string(path)?)
}

/// Writes a state in the file format, using Rust's shortest round-trip float printing.
pub fn format_state<T: Scalar>(state: &QuantumState<T>) -> String {
    let mut out = String::new();
    match state.kind() {
        StateKind::Pure(a) => {
            let _ = writeln!(out, "pure {}", state.n_parties());
            for z in a {
                let _ = writeln!(out, "{} {}", z.re.as_f64(), z.im.as_f64());
            }
        }
        StateKind::Mixed(rho) => {
            let _ = writeln!(out, "mixed {}", state.n_parties());
            for i in 0..rho.dim() {
                let row: Vec<String> = (0..rho.dim())
                    .map(|j| {
                        let z = rho.get(i, j);
                        format!("{},{}", z.re.as_f64(), z.im.as_f64())
                    })
                    .collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::ghz_state;

    #[test]
    fn pure_roundtrip() {
        let g = ghz_state::<f64>(3).unwrap();
        let back: QuantumState<f64> = parse_state(&format_state(&g)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn mixed_roundtrip() {
        let g = ghz_state::<f64>(2).unwrap();
        let m = QuantumState::mixed(2, g.density()).unwrap();
        let back: QuantumState<f64> = parse_state(&format_state(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn parses_hand_written_file() {
        let text = "# |+>\npure 1\n0.7071067811865476 0\n0.7071067811865476 0.0\n";
        let s: QuantumState<f64> = parse_state(text).unwrap();
        assert!(s.is_pure());
    }

    #[test]
    fn rejects_unnormalized_and_malformed() {
        assert!(parse_state::<f64>("pure 1\n1 0\n1 0\n").is_err());
        assert!(parse_state::<f64>("pure 1\n1 0\n").is_err());
        assert!(parse_state::<f64>("mixed 1\n1,0 0,0\n0,0 1,0\n").is_err());
        assert!(parse_state::<f64>("qudit 1\n1 0\n0 0\n").is_err());
        assert!(matches!(
            parse_state::<f64>("pure 1\n1 x\n0 0\n"),
            Err(BellError::Parse { line: 2, .. })
        ));
    }
}
