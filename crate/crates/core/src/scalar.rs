//! Real scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real floating-point type underlying the complex matrices: `f32` or `f64`.
///
/// Tolerances in this crate are quoted for `f64`. The associated functions
/// below give the per-type defaults so that generic code does not have to
/// hard-code double-precision thresholds.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Relative tolerance for the hermitian / unitary / block-diagonal predicates.
    fn check_tol() -> Self;

    /// Converts an `f64` literal. Never fails for the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn check_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn check_tol() -> Self {
        1e-5
    }
}
