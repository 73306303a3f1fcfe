use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating point scalar used by the theory routines: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static
{
    /// Convergence tolerance for fixed-point and eigenvalue solvers.
    fn solver_tolerance() -> Self;

    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable")
    }

    #[inline]
    fn of_u64(v: u64) -> Self {
        Self::from_u64(v).expect("u64 is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {
    fn solver_tolerance() -> Self {
        1e-6
    }
}

impl Scalar for f64 {
    fn solver_tolerance() -> Self {
        1e-12
    }
}
