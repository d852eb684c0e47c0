//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use multitarget::metrics::{StackScore, TrialLabel, Truth};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect()
}

/// Cosine via an explicit double loop over (trial, model) pairs.
pub fn naive_cosine_scores(trials: &[Vec<f64>], models: &[Vec<f64>]) -> Vec<Vec<f64>> {
    trials
        .iter()
        .map(|t| {
            let tn: f64 = t.iter().map(|x| x * x).sum::<f64>().sqrt();
            models
                .iter()
                .map(|m| {
                    let mn: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let mut acc = 0.0;
                    for k in 0..t.len() {
                        acc += (t[k] / tn) * (m[k] / mn);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Max / first arg-max by linear scan.
pub fn naive_argmax(row: &[f64]) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, usize::MAX);
    for (i, &y) in row.iter().enumerate() {
        if best.1 == usize::MAX || y > best.0 {
            best = (y, i);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePoint {
    pub theta: f64,
    pub misses: usize,
    pub false_alarms: usize,
    pub p_miss: f64,
    pub p_fa: f64,
}

/// Classifies every trial individually at `theta`.
///
/// Detection: accept iff `y* > theta`, reject iff `y* < theta`, tie is
/// neither. Identification (`top1`): a blacklist trial is a miss when
/// rejected, or when its arg-max is the wrong speaker.
pub fn classify_at(stack: &[StackScore<f64>], labels: &[TrialLabel], theta: f64, top1: bool) -> OraclePoint {
    let (mut misses, mut fas, mut n_bl, mut n_bg) = (0, 0, 0, 0);
    for (s, l) in stack.iter().zip(labels) {
        match l.truth {
            Truth::Background => {
                n_bg += 1;
                if s.y_star > theta {
                    fas += 1;
                }
            }
            Truth::Blacklist(k) => {
                n_bl += 1;
                let rejected = s.y_star < theta;
                let confused = top1 && s.h_star != k;
                if rejected || confused {
                    misses += 1;
                }
            }
        }
    }
    OraclePoint {
        theta,
        misses,
        false_alarms: fas,
        p_miss: misses as f64 / n_bl as f64,
        p_fa: fas as f64 / n_bg as f64,
    }
}

/// All distinct observed scores plus the infinite sentinels.
pub fn distinct_thresholds(stack: &[StackScore<f64>]) -> Vec<f64> {
    let mut t: Vec<f64> = stack.iter().map(|s| s.y_star).collect();
    t.push(f64::NEG_INFINITY);
    t.push(f64::INFINITY);
    t.sort_by(|a, b| a.partial_cmp(b).unwrap());
    t.dedup();
    t
}

pub fn enumerate_points(stack: &[StackScore<f64>], labels: &[TrialLabel], top1: bool) -> Vec<OraclePoint> {
    distinct_thresholds(stack)
        .into_iter()
        .map(|theta| classify_at(stack, labels, theta, top1))
        .collect()
}

/// EER from exhaustively enumerated points: an exact equality wins,
/// otherwise linear interpolation across the first sign change of
/// `p_miss - p_fa`.
pub fn oracle_eer(points: &[OraclePoint]) -> f64 {
    for p in points {
        if p.p_miss == p.p_fa {
            return p.p_miss;
        }
        if p.p_miss > p.p_fa {
            break;
        }
    }
    for w in points.windows(2) {
        let d0 = w[0].p_miss - w[0].p_fa;
        let d1 = w[1].p_miss - w[1].p_fa;
        if d0 < 0.0 && d1 > 0.0 {
            let frac = d0 / (d0 - d1);
            return w[0].p_miss + frac * (w[1].p_miss - w[0].p_miss);
        }
    }
    panic!("rates never cross")
}

/// Random detection instance: `n` trials over `s` detectors; about
/// `blacklist_frac` of trials are blacklist with a target boost on their
/// own detector. `quantum` > 0 rounds scores to create ties.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    s: usize,
    blacklist_frac: f64,
    quantum: f64,
) -> (Vec<StackScore<f64>>, Vec<TrialLabel>) {
    let mut stack = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for t in 0..n {
        let truth = if t == 0 || (t != 1 && rng.random::<f64>() < blacklist_frac) {
            Truth::Blacklist(rng.random_range(0..s))
        } else {
            Truth::Background
        };
        let row: Vec<f64> = (0..s)
            .map(|i| {
                let mut y: f64 = rng.sample(rand_distr::StandardNormal);
                if truth == Truth::Blacklist(i) {
                    y += 2.0;
                }
                if quantum > 0.0 {
                    y = (y / quantum).round() * quantum;
                }
                y
            })
            .collect();
        let (y_star, h_star) = naive_argmax(&row);
        stack.push(StackScore { y_star, h_star });
        labels.push(TrialLabel {
            utterance_id: format!("t{t}"),
            truth,
        });
    }
    (stack, labels)
}
