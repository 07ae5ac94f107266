//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};

/// A real scalar type usable for edge weights, probabilities and risks.
///
/// Implemented for `f32` and `f64`. The tolerances are absolute and sized for
/// unit-scale weights and probabilities.
pub trait Scalar:
    Float + FromPrimitive + FromStr + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance used when comparing risks, masses and thresholds.
    fn tolerance() -> Self;

    /// Tolerance used by the edge-ratio assumption checks.
    fn ratio_tolerance() -> Self;

    /// Converts an `f64` constant into this scalar type.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable in scalar type")
    }

    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }

    fn ratio_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }

    fn ratio_tolerance() -> Self {
        1e-6
    }
}

/// `true` when `a` and `b` differ by at most [`Scalar::tolerance`].
pub fn approx_eq<T: Scalar>(a: T, b: T) -> bool {
    (a - b).abs() <= T::tolerance()
}
