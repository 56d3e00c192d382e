//! Scalar abstraction for the information-theoretic core.
//!
//! All probability mass and information values in [`crate::info_core`] are
//! generic over [`Real`]; everything downstream runs at `f64` through the
//! aliases at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar carrying probability mass and bits: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Construction tolerance for probability-vector sums.
    fn mass_tol() -> Self;

    /// Comparison tolerance for computed information quantities.
    fn info_tol() -> Self;
}

impl Real for f64 {
    fn mass_tol() -> Self {
        1e-12
    }

    fn info_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn mass_tol() -> Self {
        1e-5
    }

    fn info_tol() -> Self {
        1e-4
    }
}

/// Lossless-enough constant conversion; panics only on NaN.
pub(crate) fn real<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("constant conversion")
}

/// Clamp tiny negative rounding noise on a mathematically nonnegative value.
pub(crate) fn clamp_nonneg<R: Real>(x: R) -> R {
    if x < R::zero() {
        debug_assert!(x > -R::info_tol(), "nonnegative quantity came out {x}");
        R::zero()
    } else {
        x
    }
}
