use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the linear algebra is generic over (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// A tolerance of `x`, never tighter than 64 ulps of this type.
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Fixed numerical tolerances.
pub mod tol {
    /// Hermiticity, involution and normalization checks.
    pub const EXACT: f64 = 1e-12;
    /// Imaginary residue discarded from expectations of Hermitian operators.
    pub const IMAG: f64 = 1e-10;
    /// Relative PSD eigenvalue tolerance.
    pub const PSD: f64 = 1e-10;
    /// Overshoot of η and χ beyond their ranges that is clamped instead of rejected.
    pub const CLAMP: f64 = 1e-10;
    /// Block commutation threshold for the covariance inequalities.
    pub const COMMUTE: f64 = 1e-10;
    /// Off-diagonal Frobenius norm at which cyclic Jacobi stops.
    pub const JACOBI: f64 = 1e-13;
    /// Bound slack below which a check counts as a violation.
    pub const SLACK: f64 = 1e-9;
}
