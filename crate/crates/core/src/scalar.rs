//! Scalar abstraction for the numeric kernels.
//!
//! Everything that touches amplitudes is generic over a real scalar type so
//! the same code runs in `f32` for quick scans and `f64` for anything that
//! feeds a tolerance-checked result. Concrete aliases live at the crate root.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar underlying all complex arithmetic in the simulators.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + Sum<Self>
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Inject an `f64` constant (tolerances, gate entries, RNG draws).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant must convert into the scalar type")
    }

    /// Lossy view as `f64`, used for reporting and serialization.
    fn as_f64(self) -> f64;
}

impl Real for f32 {
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn as_f64(self) -> f64 {
        self
    }
}

/// Complex number over the crate's scalar abstraction.
pub type C<T> = Complex<T>;

/// `a + ib` with scalar conversion from `f64`.
pub fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::of(re), T::of(im))
}

/// Squared modulus, kept in the scalar type.
pub fn norm_sqr<T: Real>(z: C<T>) -> T {
    z.re * z.re + z.im * z.im
}
