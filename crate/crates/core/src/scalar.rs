//! Scalar abstraction shared by the similarity, matcher and statistics code.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point type the numeric modules are generic over.
///
/// Implemented for `f32` and `f64`. Convergence tolerances inside the
/// statistics code are derived from [`Scalar::tolerance`], so `f32` gets a
/// looser (but attainable) stopping rule than `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Root-finding / continued-fraction stopping tolerance.
    fn tolerance() -> Self;

    /// Lossless-enough conversion from a literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-14
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-6
    }
}
