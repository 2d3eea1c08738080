//! Scalar abstraction: the mass and entropy arithmetic is generic over the
//! floating-point type.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_traits::Float;

/// Floating-point scalar the library is generic over (`f32` or `f64`).
///
/// The associated tolerances scale with the type's precision; the `f64`
/// values are the contractual ones used by the CLI and the test suite.
pub trait Real:
    Float + AddAssign + SubAssign + MulAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Tolerance for "masses sum to one" bookkeeping.
    const MASS_TOL: Self;
    /// Smallest objective decrease accepted as an improvement during descent.
    const IMPROVE_EPS: Self;

    fn from_f64(x: f64) -> Self;
    fn into_f64(self) -> f64;
}

impl Real for f64 {
    const MASS_TOL: Self = 1e-9;
    const IMPROVE_EPS: Self = 1e-12;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn into_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    const MASS_TOL: Self = 1e-6;
    const IMPROVE_EPS: Self = 1e-6;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn into_f64(self) -> f64 {
        self as f64
    }
}

/// True iff `v` is a valid weight in `[0, 1]` (rejects NaN).
pub(crate) fn in_unit<F: Real>(v: F) -> bool {
    v >= F::zero() && v <= F::one()
}
