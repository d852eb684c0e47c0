//! Top-S and Top-1 threshold sweeps.
//!
//! At threshold `theta` a trial is accepted when `y* > theta` and rejected
//! when `y* < theta`; a trial sitting exactly on `theta` is neither a miss
//! nor a false alarm of the detection decision. For Top-1, a blacklist trial
//! whose arg-max detector is the wrong speaker is an identification failure
//! and counts as a miss at every threshold, which keeps the Top-1 miss rate
//! monotone in `theta`.

use crate::error::{Error, Result};
use crate::metrics::eer::eer_from_points;
use crate::metrics::types::{DetectorReport, Mode, OperatingPoint, StackScore, ThresholdPolicy, TrialCounts, TrialLabel, Truth};
use crate::scalar::{cmp_finite, Scalar};

/// Sorted per-class score lists a sweep is evaluated from.
struct Split<T> {
    blacklist: Vec<T>,
    /// Blacklist trials whose arg-max matches the truth.
    identified: Vec<T>,
    background: Vec<T>,
}

impl<T: Scalar> Split<T> {
    fn new(stack: &[StackScore<T>], labels: &[TrialLabel]) -> Result<Self> {
        if stack.len() != labels.len() {
            return Err(Error::Shape {
                context: "labels vs stack scores",
                expected: stack.len(),
                found: labels.len(),
            });
        }
        let mut split = Split {
            blacklist: Vec::new(),
            identified: Vec::new(),
            background: Vec::new(),
        };
        for (s, l) in stack.iter().zip(labels) {
            if !s.y_star.is_finite() {
                return Err(Error::Config(format!("non-finite stack score for trial `{}`", l.utterance_id)));
            }
            match l.truth {
                Truth::Background => split.background.push(s.y_star),
                Truth::Blacklist(k) => {
                    split.blacklist.push(s.y_star);
                    if s.h_star == k {
                        split.identified.push(s.y_star);
                    }
                }
            }
        }
        if split.blacklist.is_empty() {
            return Err(Error::NoTrials("blacklist"));
        }
        if split.background.is_empty() {
            return Err(Error::NoTrials("background"));
        }
        split.blacklist.sort_unstable_by(cmp_finite);
        split.identified.sort_unstable_by(cmp_finite);
        split.background.sort_unstable_by(cmp_finite);
        Ok(split)
    }

    fn thresholds(&self, policy: &ThresholdPolicy<T>) -> Vec<T> {
        let mut grid = match policy {
            ThresholdPolicy::Observed => {
                let mut g = Vec::with_capacity(self.blacklist.len() + self.background.len() + 2);
                g.push(T::neg_infinity());
                g.extend_from_slice(&self.blacklist);
                g.extend_from_slice(&self.background);
                g.push(T::infinity());
                g
            }
            ThresholdPolicy::Explicit(g) => g.iter().copied().filter(|t| !t.is_nan()).collect(),
        };
        grid.sort_unstable_by(cmp_finite);
        grid.dedup();
        grid
    }

    fn points(&self, mode: Mode, thresholds: &[T]) -> Vec<OperatingPoint<T>> {
        let n_bl = self.blacklist.len();
        let n_bg = self.background.len();
        let confused = n_bl - self.identified.len();
        thresholds
            .iter()
            .map(|&theta| {
                let misses = match mode {
                    Mode::TopS => count_below(&self.blacklist, theta),
                    Mode::Top1 => count_below(&self.identified, theta) + confused,
                };
                let false_alarms = count_above(&self.background, theta);
                OperatingPoint {
                    theta,
                    p_miss: T::from_count(misses) / T::from_count(n_bl),
                    p_fa: T::from_count(false_alarms) / T::from_count(n_bg),
                    misses,
                    false_alarms,
                }
            })
            .collect()
    }
}

fn count_below<T: Scalar>(sorted: &[T], theta: T) -> usize {
    sorted.partition_point(|&y| y < theta)
}

fn count_above<T: Scalar>(sorted: &[T], theta: T) -> usize {
    sorted.len() - sorted.partition_point(|&y| y <= theta)
}

/// Sweeps the detector selected by `mode` over `policy`'s thresholds.
pub fn sweep<T: Scalar>(
    mode: Mode,
    stack: &[StackScore<T>],
    labels: &[TrialLabel],
    policy: &ThresholdPolicy<T>,
) -> Result<DetectorReport<T>> {
    let split = Split::new(stack, labels)?;
    let thresholds = split.thresholds(policy);
    report(mode, &split, &thresholds)
}

fn report<T: Scalar>(mode: Mode, split: &Split<T>, thresholds: &[T]) -> Result<DetectorReport<T>> {
    let operating_points = split.points(mode, thresholds);
    let (eer, eer_threshold) = eer_from_points(&operating_points)?;
    Ok(DetectorReport {
        mode,
        operating_points,
        eer,
        eer_threshold,
        counts: TrialCounts {
            blacklist: split.blacklist.len(),
            background: split.background.len(),
        },
    })
}

/// Blacklist-membership detector: a miss is a blacklist trial with `y* < theta`.
pub fn sweep_top_s<T: Scalar>(
    stack: &[StackScore<T>],
    labels: &[TrialLabel],
    policy: &ThresholdPolicy<T>,
) -> Result<DetectorReport<T>> {
    sweep(Mode::TopS, stack, labels, policy)
}

/// Identification detector: additionally a miss whenever `h*` is not the
/// trial's true speaker. False alarms are identical to Top-S.
pub fn sweep_top_1<T: Scalar>(
    stack: &[StackScore<T>],
    labels: &[TrialLabel],
    policy: &ThresholdPolicy<T>,
) -> Result<DetectorReport<T>> {
    sweep(Mode::Top1, stack, labels, policy)
}

/// Both sweeps over a shared threshold grid.
pub fn sweep_both<T: Scalar>(
    stack: &[StackScore<T>],
    labels: &[TrialLabel],
    policy: &ThresholdPolicy<T>,
) -> Result<(DetectorReport<T>, DetectorReport<T>)> {
    let split = Split::new(stack, labels)?;
    let thresholds = split.thresholds(policy);
    Ok((report(Mode::TopS, &split, &thresholds)?, report(Mode::Top1, &split, &thresholds)?))
}
