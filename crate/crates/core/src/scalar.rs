//! Scalar abstraction shared by every numerical module.
//!
//! All solver types are generic over [`Real`], which is implemented for `f32`
//! and `f64`. The accuracy targets quoted throughout the crate (1e-10 and
//! tighter) are only reachable in `f64`; `f32` instantiations run the same
//! algorithms at single-precision accuracy.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};

/// Floating point scalar usable by the solver: `f32` or `f64`.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Machine epsilon.
    const EPS: Self;
    /// Positive infinity, used as the pole sentinel of the Gamma function.
    const INFINITY: Self;
    /// Tolerance the special-function evaluators aim for.
    const TARGET_TOL: Self;

    /// Converts an `f64` literal; exact for every constant the crate uses.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("index representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn is_nan(self) -> bool {
        self.as_f64().is_nan()
    }
}

impl Real for f32 {
    const EPS: Self = f32::EPSILON;
    const INFINITY: Self = f32::INFINITY;
    const TARGET_TOL: Self = 1e-6;
}

impl Real for f64 {
    const EPS: Self = f64::EPSILON;
    const INFINITY: Self = f64::INFINITY;
    const TARGET_TOL: Self = 1e-14;
}
