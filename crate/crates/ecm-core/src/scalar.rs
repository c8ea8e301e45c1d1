//! Floating-point abstraction the numeric code is generic over.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::AddAssign;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar type for datasets, chromosomes, and objectives.
///
/// Implemented for `f32` and `f64`. The bound set covers everything the
/// algorithms need: IEEE arithmetic with transcendentals ([`Float`]),
/// conversions from literal constants, accumulation, and printing.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + AddAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant, panicking only for values outside the
    /// type's range (never the case for the constants used here).
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("constant not representable in scalar type")
    }

    /// Widens to `f64` for reporting and metrics.
    fn to64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
