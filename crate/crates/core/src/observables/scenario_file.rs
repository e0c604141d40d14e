//! Scenario files.
//!
//! ```text
//! parties 3 family planar
//! -pi/4 pi/4
//! 0     pi/2
//! 0     pi/2
//! ```
//! `family bloch` takes six reals per party: the unnormalized directions of
//! setting 0 and setting 1. Angles accept fractional-π syntax.

use std::path::Path;

use crate::error::{BellError, Result};
use crate::scalar::Scalar;

use super::{Family, MeasurementScenario};

fn perr(line: usize, msg: impl Into<String>) -> BellError {
    BellError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses radians, accepting `pi`, `-pi/4`, `3pi/4`, `0.5*pi`, `2pi/3` and plain decimals.
pub fn parse_angle(s: &str) -> Option<f64> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let lower = t.to_ascii_lowercase();
    let (num, den) = match lower.split_once('/') {
        Some((n, d)) => (n, Some(d.trim().parse::<f64>().ok()?)),
        None => (lower.as_str(), None),
    };
    let coeff_str = num.trim().strip_suffix("pi")?.trim_end();
    let coeff_str = coeff_str.strip_suffix('*').unwrap_or(coeff_str).trim();
    let coeff = match coeff_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().ok()?,
    };
    let v = coeff * std::f64::consts::PI / den.unwrap_or(1.0);
    v.is_finite().then_some(v)
}

pub fn parse_scenario<T: Scalar>(text: &str) -> Result<MeasurementScenario<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty scenario file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let (n, family) = match toks.as_slice() {
        ["parties", n, "family", fam] => (
            n.parse::<usize>()
                .map_err(|_| perr(hl, format!("bad party count {n:?}")))?,
            *fam,
        ),
        _ => return Err(perr(hl, "expected \"parties N family planar|bloch\"")),
    };
    if n == 0 || n > 12 {
        return Err(perr(hl, "party count must be in 1..=12"));
    }
    let body: Vec<(usize, &str)> = lines.collect();
    if body.len() != n {
        return Err(perr(
            hl,
            format!("expected {n} party lines, found {}", body.len()),
        ));
    }
    let rows = body
        .iter()
        .map(|&(ln, l)| {
            l.split_whitespace()
                .map(|t| parse_angle(t).ok_or_else(|| perr(ln, format!("not a number: {t:?}"))))
                .collect::<Result<Vec<f64>>>()
                .map(|v| (ln, v))
        })
        .collect::<Result<Vec<_>>>()?;
    match family {
        "planar" => {
            let angles = rows
                .iter()
                .map(|(ln, v)| match v.as_slice() {
                    &[a, b] => Ok([T::lit(a), T::lit(b)]),
                    _ => Err(perr(*ln, "expected \"theta0 theta1\"")),
                })
                .collect::<Result<Vec<_>>>()?;
            MeasurementScenario::planar(&angles)
        }
        "bloch" => {
            let dirs = rows
                .iter()
                .map(|(ln, v)| match v.as_slice() {
                    &[a, b, c, d, e, f] => Ok([
                        [T::lit(a), T::lit(b), T::lit(c)],
                        [T::lit(d), T::lit(e), T::lit(f)],
                    ]),
                    _ => Err(perr(*ln, "expected six reals")),
                })
                .collect::<Result<Vec<_>>>()?;
            MeasurementScenario::bloch(&dirs)
        }
        other => Err(perr(hl, format!("unknown family {other:?}"))),
    }
}

pub fn read_scenario<T: Scalar>(path: &Path) -> Result<MeasurementScenario<T>> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

/// Writes a planar or Bloch scenario; custom scenarios have no file form.
pub fn format_scenario<T: Scalar>(sc: &MeasurementScenario<T>) -> Option<String> {
    let n = sc.n_parties();
    match sc.family() {
        Family::Planar(a) => {
            let mut out = format!("parties {n} family planar\n");
            for [t0, t1] in a {
                out += &format!("{} {}\n", t0.as_f64(), t1.as_f64());
            }
            Some(out)
        }
        Family::Bloch(d) => {
            let mut out = format!("parties {n} family bloch\n");
            for [a, b] in d {
                let vals: Vec<String> = a.iter().chain(b).map(|x| x.as_f64().to_string()).collect();
                out += &vals.join(" ");
                out.push('\n');
            }
            Some(out)
        }
        Family::Custom => None,
    }
}
