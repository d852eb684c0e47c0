//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, NumCast};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar used for embeddings, scores and rates: `f32` or `f64`.
///
/// `Display` must print the shortest decimal that parses back to the same
/// value; both primitive floats satisfy this, which is what makes the text
/// formats round-trip bit-exactly.
pub trait Scalar:
    Float
    + FromPrimitive
    + NumCast
    + Sum
    + Default
    + Debug
    + Display
    + FromStr
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Tolerance on the Euclidean norm of a unit vector.
    const UNIT_NORM_TOLERANCE: f64;

    /// Shorthand for constants that are exactly representable in both widths.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("finite literal")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        <Self as NumCast>::from(n).expect("count fits in a float")
    }

    #[inline]
    fn to_f64_lossless(self) -> f64 {
        <f64 as NumCast>::from(self).expect("float widens to f64")
    }
}

impl Scalar for f32 {
    const UNIT_NORM_TOLERANCE: f64 = 1e-6;
}

impl Scalar for f64 {
    const UNIT_NORM_TOLERANCE: f64 = 1e-12;
}

/// Total order on finite scalars. Callers guarantee the inputs are not NaN.
#[inline]
pub(crate) fn cmp_finite<T: Scalar>(a: &T, b: &T) -> std::cmp::Ordering {
    a.partial_cmp(b).expect("NaN in ordered comparison")
}
