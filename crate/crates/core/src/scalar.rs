//! Scalar abstractions.
//!
//! [`Scalar`] is the field the exact parts of the crate work over: parameter
//! maps, potential coefficients and the termination polynomial. It is
//! satisfied by `f32`, `f64` and by [`num_rational::BigRational`].
//!
//! [`Real`] adds the transcendental operations needed for root finding,
//! wavefunction evaluation and the finite-difference oracle. Only `f32` and
//! `f64` implement it.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// A field element usable by the exact (rational-capable) routines.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Neg<Output = Self> + FromPrimitive + ToPrimitive
{
    /// Converts a small integer. Every implementor represents these exactly.
    fn int(v: i64) -> Self {
        Self::from_i64(v).expect("integer literal representable in scalar type")
    }

    /// Converts an `f64` literal (exactly for rationals, rounded for floats).
    fn real(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal representable in scalar type")
    }

    fn magnitude(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Lossy view used for diagnostics and error payloads.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Clone + Debug + PartialOrd + Num + Neg<Output = T> + FromPrimitive + ToPrimitive
{
}

/// Floating-point scalar: `f32` or `f64`.
pub trait Real: Scalar + Float + FloatConst + Display + LowerExp + Send + Sync + 'static {
    /// Shorthand for constants in generic code.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as Scalar>::real(v)
    }
}

impl Real for f32 {}
impl Real for f64 {}
