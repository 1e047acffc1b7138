use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type the network math is evaluated in.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every finite `f64` is representable
    /// (possibly rounded) in the supported types.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    /// Tolerance used when validating sums such as idiotope rows.
    fn sum_tolerance() -> Self;
}

impl Scalar for f32 {
    fn sum_tolerance() -> Self {
        1e-5
    }
}

impl Scalar for f64 {
    fn sum_tolerance() -> Self {
        1e-9
    }
}
