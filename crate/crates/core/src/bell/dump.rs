//! Term-list text form: one term per line, `<coeff> <bits>`, e.g. `+1 001`,
//! sorted by bitstring.

use crate::error::{BellError, Result};

use super::{BellPolynomial, Dyadic, Label, SettingTuple};

pub fn dump(p: &BellPolynomial) -> String {
    p.terms()
        .map(|t| format!("{} {}\n", t.coeff, t.settings))
        .collect()
}

pub fn parse_dump(text: &str) -> Result<BellPolynomial> {
    let mut n_parties = None;
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| BellError::Parse { line: i + 1, msg };
        let (c, bits) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| perr("expected \"<coeff> <bits>\"".into()))?;
        let bits = bits.trim();
        let coeff: Dyadic = c.parse().map_err(perr)?;
        if coeff.is_zero() {
            return Err(perr("zero coefficient".into()));
        }
        let settings: Vec<u8> = bits
            .bytes()
            .map(|b| match b {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(perr(format!("bad bitstring {bits:?}"))),
            })
            .collect::<Result<_>>()?;
        let n = *n_parties.get_or_insert(settings.len());
        if settings.len() != n || n == 0 || n > 31 {
            return Err(perr(format!("bitstring {bits:?} has the wrong length")));
        }
        entries.push((SettingTuple::from_settings(&settings).bits(), coeff, i + 1));
    }
    let n = n_parties.ok_or(BellError::Parse {
        line: 1,
        msg: "empty polynomial".into(),
    })?;
    let mut p = BellPolynomial::new(n, Label::Custom);
    for (bits, coeff, line) in entries {
        if p.raw_terms().contains_key(&bits) {
            return Err(BellError::Parse {
                line,
                msg: "duplicate setting tuple".into(),
            });
        }
        p.add_term(bits, coeff);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{mk, mk_recursion, svetlichny, Parity};

    #[test]
    fn mk3_dump_text() {
        assert_eq!(dump(&mk(3).unwrap()), "+1 001\n+1 010\n+1 100\n-1 111\n");
    }

    #[test]
    fn roundtrip() {
        for p in [
            svetlichny(4, Parity::Plus).unwrap(),
            mk(5).unwrap(),
            mk_recursion(4).unwrap(),
        ] {
            let text = dump(&p);
            let back = parse_dump(&text).unwrap();
            assert_eq!(back, p);
            assert_eq!(dump(&back), text);
        }
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse_dump("").is_err());
        assert!(parse_dump("+1 012\n").is_err());
        assert!(parse_dump("+1 01\n-1 011\n").is_err());
        assert!(parse_dump("+1 01\n-1 01\n").is_err());
        assert!(parse_dump("+1/3 01\n").is_err());
        assert!(parse_dump("0 01\n").is_err());
    }
}
