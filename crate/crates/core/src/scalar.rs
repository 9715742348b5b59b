//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;

/// Real floating-point scalar: `f32` or `f64`.
///
/// The tolerances quoted throughout the crate (1e-9 and tighter) assume `f64`;
/// `f32` works everywhere but only to single-precision accuracy.
pub trait Real:
    Float + FloatConst + FromPrimitive + FftNum + Default + Display + Debug + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub(crate) fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize representable in scalar type")
}

#[inline]
pub(crate) fn from_i64<T: Real>(n: i64) -> T {
    T::from_i64(n).expect("i64 representable in scalar type")
}

/// Unnormalized sinc, `sin(x)/x` with `sinc(0) = 1`.
#[inline]
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < lit(1e-8) {
        // second-order Taylor term keeps full precision near the origin
        T::one() - x * x / lit(6.0)
    } else {
        x.sin() / x
    }
}
