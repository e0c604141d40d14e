use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::scalar::Scalar;

/// Exact rational `num / 2^exp`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i64,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };
    pub const MINUS_ONE: Dyadic = Dyadic { num: -1, exp: 0 };
    pub const HALF: Dyadic = Dyadic { num: 1, exp: 1 };

    pub fn new(num: i64, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.reduce();
        d
    }

    pub fn integer(n: i64) -> Self {
        Dyadic { num: n, exp: 0 }
    }

    fn reduce(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().min(self.exp);
        self.num >>= tz;
        self.exp -= tz;
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    /// Exponent of the power-of-two denominator.
    pub fn denominator_exp(self) -> u32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// `±1`.
    pub fn is_unit(self) -> bool {
        self.exp == 0 && self.num.abs() == 1
    }

    /// Multiplies by `2^k`.
    pub fn mul_pow2(self, k: u32) -> Self {
        if k <= self.exp {
            Dyadic::new(self.num, self.exp - k)
        } else {
            let shift = k - self.exp;
            let num = self
                .num
                .checked_mul(1i64.checked_shl(shift).expect("dyadic shift overflow"))
                .expect("dyadic overflow");
            Dyadic { num, exp: 0 }
        }
    }

    pub fn to_scalar<T: Scalar>(self) -> T {
        T::lit(self.num as f64) / T::lit(2f64.powi(self.exp as i32))
    }

    fn aligned(self, other: Self) -> (i64, i64, u32) {
        let e = self.exp.max(other.exp);
        let scale = |d: Dyadic| {
            d.num
                .checked_mul(1i64 << (e - d.exp))
                .expect("dyadic overflow")
        };
        (scale(self), scale(other), e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a.checked_add(b).expect("dyadic overflow"), e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(
            self.num.checked_mul(rhs.num).expect("dyadic overflow"),
            self.exp + rhs.exp,
        )
    }
}

/// `+1`, `-1`, `+3/4`, `-1/8`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{:+}", self.num)
        } else {
            write!(f, "{:+}/{}", self.num, 1u64 << self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: i64 = n.parse().map_err(|_| format!("bad numerator {n:?}"))?;
        let den: u64 = d.parse().map_err(|_| format!("bad denominator {d:?}"))?;
        if den == 0 || !den.is_power_of_two() {
            return Err(format!("denominator {den} is not a power of two"));
        }
        Ok(Dyadic::new(num, den.trailing_zeros()))
    }
}
