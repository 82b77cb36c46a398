use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating-point scalar the whole crate is generic over (`f32` or `f64`).
///
/// Tolerances throughout the crate are written as `f64` literals tuned for
/// double precision and converted with [`Scalar::tol`], which never lets a
/// tolerance drop below a small multiple of the type's machine epsilon.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` constant.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable in scalar type")
    }

    /// Converts an `f64` tolerance, floored at `32 * epsilon`.
    #[inline]
    fn tol(v: f64) -> Self {
        Self::of(v).max(Self::epsilon() * Self::of(32.0))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_floor_applies_to_single_precision() {
        assert_eq!(<f64 as Scalar>::tol(1e-8), 1e-8);
        assert!(<f32 as Scalar>::tol(1e-12) >= f32::EPSILON * 32.0);
    }
}
