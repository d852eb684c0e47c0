use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::types::{DetectorReport, OperatingPoint};
use crate::scalar::Scalar;

/// Down-samples a report's staircase to at most `max_points` operating points.
///
/// Always kept, in priority order: the two sentinel endpoints, the points
/// bracketing the EER, and the first and last finite thresholds. The rest of
/// the budget is spread evenly along the curve's arc length in
/// `(p_fa, p_miss)`, so flat stretches cost few points and steep ones many.
pub fn det_points<T: Scalar>(report: &DetectorReport<T>, max_points: usize) -> Result<Vec<OperatingPoint<T>>> {
    if max_points < 2 {
        return Err(Error::Config(format!("max_points must be at least 2, got {max_points}")));
    }
    let pts = &report.operating_points;
    let n = pts.len();
    if n <= max_points {
        return Ok(pts.clone());
    }

    let mut mandatory: Vec<usize> = vec![0, n - 1];
    let gap = |p: &OperatingPoint<T>| p.p_miss - p.p_fa;
    if let Some(i) = pts.iter().position(|p| gap(p) >= T::zero()) {
        if i > 0 && gap(&pts[i]) > T::zero() {
            mandatory.push(i - 1);
        }
        mandatory.push(i);
    }
    if let Some(i) = pts.iter().position(|p| p.theta.is_finite()) {
        mandatory.push(i);
    }
    if let Some(i) = pts.iter().rposition(|p| p.theta.is_finite()) {
        mandatory.push(i);
    }
    let mut required = BTreeSet::new();
    for i in mandatory {
        if required.len() == max_points {
            break;
        }
        required.insert(i);
    }

    let mut arc = Vec::with_capacity(n);
    let mut total = T::zero();
    arc.push(total);
    for w in pts.windows(2) {
        total = total + (w[1].p_fa - w[0].p_fa).abs() + (w[1].p_miss - w[0].p_miss).abs();
        arc.push(total);
    }

    let budget = max_points - required.len();
    for extra in (0..=budget).rev() {
        let mut chosen = required.clone();
        for j in 1..=extra {
            let target = total * T::from_count(j) / T::from_count(extra + 1);
            let i = arc.partition_point(|&a| a < target).min(n - 1);
            chosen.insert(i);
        }
        if chosen.len() <= max_points {
            return Ok(chosen.into_iter().map(|i| pts[i]).collect());
        }
    }
    Ok(required.into_iter().map(|i| pts[i]).collect())
}

/// Writes DET points as CSV with header `theta,p_fa,p_miss`.
/// Infinite thresholds are written as `-inf` / `inf`.
pub fn save_det_csv<T: Scalar>(points: &[OperatingPoint<T>], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_det_csv(points, &mut out)
        .and_then(|()| out.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn write_det_csv<T: Scalar>(points: &[OperatingPoint<T>], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "theta,p_fa,p_miss")?;
    for p in points {
        writeln!(out, "{},{},{}", p.theta, p.p_fa, p.p_miss)?;
    }
    Ok(())
}
