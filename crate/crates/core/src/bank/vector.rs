use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Norms below this are treated as a zero vector.
pub const ZERO_NORM: f64 = 1e-15;

/// Dot product accumulated strictly in index order.
#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        acc = acc + x * y;
    }
    acc
}

#[inline]
pub fn l2_norm<T: Scalar>(v: &[T]) -> T {
    dot(v, v).sqrt()
}

/// Returns `v / ‖v‖₂`.
pub fn length_normalize<T: Scalar>(v: &[T]) -> Result<Vec<T>> {
    let mut out = v.to_vec();
    length_normalize_in_place(&mut out).map(|()| out)
}

pub(crate) fn length_normalize_in_place<T: Scalar>(v: &mut [T]) -> Result<()> {
    let norm = l2_norm(v);
    if norm.is_nan() || norm.to_f64_lossless() < ZERO_NORM {
        return Err(Error::ZeroVector {
            what: format!("norm {}", norm),
        });
    }
    for x in v.iter_mut() {
        *x = *x / norm;
    }
    Ok(())
}
