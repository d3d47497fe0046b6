//! Scalar abstractions shared by every module.
//!
//! [`Scalar`] is the ring-level bound: enough for jet arithmetic, octonion
//! products and Jordan-algebra identities, and satisfied by exact rationals.
//! [`Real`] adds the transcendental functions needed by the geometry.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, Signed};

/// Commutative ring element with exact or floating representation.
pub trait Scalar:
    Num + NumAssign + Copy + Neg<Output = Self> + FromPrimitive + PartialOrd + Debug + Send + Sync + 'static
{
    /// Conversion from a small integer (table lookups, multi-index factors).
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer representable in scalar type")
    }

    /// Exact quotient of two integers.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Absolute value, available for both floats and rationals.
    fn magnitude(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }
}

impl<T> Scalar for T where
    T: Num + NumAssign + Copy + Neg<Output = T> + FromPrimitive + PartialOrd + Debug + Send + Sync + 'static
{
}

/// Floating point scalar: f32 or f64.
pub trait Real: Scalar + Float + FloatConst + Signed + Display + LowerExp {
    fn from_f64_lossy(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite f64 converts")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// `self^(p/q)` for a rational exponent.
    fn pow_ratio(self, p: Ratio<i64>) -> Self {
        if p.is_integer() {
            self.powi(*p.numer() as i32)
        } else {
            self.powf(Self::ratio(*p.numer(), *p.denom()))
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
