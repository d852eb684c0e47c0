use crate::error::{Error, Result};
use crate::metrics::types::OperatingPoint;
use crate::scalar::Scalar;

/// Equal error rate and its threshold from a monotone sweep.
///
/// Returns the first swept point where the two rates are exactly equal.
/// Otherwise finds the adjacent pair where `p_miss - p_fa` changes sign and
/// interpolates both rates (and the threshold, when both ends are finite)
/// linearly to the crossing. If the rates never cross, the point with the
/// smallest gap is used and the EER is the mean of its two rates.
pub fn eer_from_points<T: Scalar>(points: &[OperatingPoint<T>]) -> Result<(T, T)> {
    if points.is_empty() {
        return Err(Error::Empty("operating points"));
    }
    let gap = |p: &OperatingPoint<T>| p.p_miss - p.p_fa;
    let half = T::lit(0.5);

    match points.iter().position(|p| gap(p) >= T::zero()) {
        Some(i) if gap(&points[i]) == T::zero() => Ok((points[i].p_miss, points[i].theta)),
        Some(i) if i > 0 => {
            let (a, b) = (&points[i - 1], &points[i]);
            let (da, db) = (gap(a), gap(b));
            let t = -da / (db - da);
            let eer = a.p_miss + t * (b.p_miss - a.p_miss);
            let theta = match (a.theta.is_finite(), b.theta.is_finite()) {
                (true, true) => a.theta + t * (b.theta - a.theta),
                (true, false) => a.theta,
                (false, true) => b.theta,
                (false, false) => if t < half { a.theta } else { b.theta },
            };
            Ok((eer, theta))
        }
        _ => {
            let p = points
                .iter()
                .min_by(|x, y| gap(x).abs().partial_cmp(&gap(y).abs()).expect("finite rates"))
                .expect("non-empty");
            Ok(((p.p_miss + p.p_fa) * half, p.theta))
        }
    }
}
