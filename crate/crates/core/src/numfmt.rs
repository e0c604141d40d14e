//! Locale-independent decimal formatting.

/// `%.{digits}g`-style formatting: `digits` significant digits, trailing zeros
/// trimmed, scientific notation outside `1e-5 ≤ |x| < 1e{digits}`.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Fifteen significant digits, the precision of every text output.
pub fn dec(x: f64) -> String {
    sig(x, 15)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(dec(4.0 * 2f64.sqrt()), "5.65685424949238");
        assert_eq!(dec(4.0), "4");
        assert_eq!(dec(-0.5), "-0.5");
        assert_eq!(dec(0.0), "0");
        assert_eq!(dec(-0.0), "0");
        assert_eq!(dec(1.0e-7), "1e-7");
        assert_eq!(dec(-std::f64::consts::PI), "-3.14159265358979");
        assert_eq!(dec(1.0e20), "1e20");
        assert_eq!(dec(123456.0), "123456");
        assert_eq!(dec(0.000123), "0.000123");
    }
}
