use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the model is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Magnitude beyond which `exp(-x)` is treated as exactly zero.
    const EXP_SATURATION: f64;

    /// Lossy conversion from `f64`. Every value this crate converts is
    /// representable (possibly rounded) in both supported widths.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 value representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f64 {
    const EXP_SATURATION: f64 = 700.0;
}

impl Scalar for f32 {
    const EXP_SATURATION: f64 = 87.0;
}

/// `exp(-x)` for `x >= 0`, saturating to exactly zero for huge arguments.
pub(crate) fn exp_neg<T: Scalar>(x: T) -> T {
    if x.as_f64() > T::EXP_SATURATION {
        T::zero()
    } else {
        (-x).exp()
    }
}

/// `(1 - e^{-x}) / x`, continuous at `x = 0` where it equals 1.
pub(crate) fn exprel_neg<T: Scalar>(x: T) -> T {
    if x == T::zero() {
        T::one()
    } else {
        -(-x).exp_m1() / x
    }
}

/// Clamp to the unit interval; used for CDF values after roundoff.
pub(crate) fn clamp_unit<T: Scalar>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}
