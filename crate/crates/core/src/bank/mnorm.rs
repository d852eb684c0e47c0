//! Multi-target score normalization.
//!
//! Every detector's scores are standardized with the mean and population
//! standard deviation of that detector's scores over the blacklist cohort
//! (all blacklist utterances, the detector's own speaker included).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bank::enroll::DetectorBank;
use crate::bank::score::score_all;
use crate::bank::scores::ScoreMatrix;
use crate::error::{Error, Result};
use crate::io::embeddings::EmbeddingSet;
use crate::scalar::Scalar;

/// Standard deviations below this mark a degenerate cohort.
pub const SIGMA_FLOOR: f64 = 1e-12;

/// Per-detector cohort statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MNormStats<T> {
    pub detector_ids: Vec<String>,
    pub mu: Vec<T>,
    pub sigma: Vec<T>,
    pub cohort_size: usize,
}

impl<T: Scalar> MNormStats<T> {
    /// Two-pass mean then variance over the cohort rows, each accumulated in
    /// cohort order.
    pub fn from_cohort_scores(cohort: &ScoreMatrix<T>) -> Result<Self> {
        Self::from_rows(cohort.rows(), cohort.detector_ids())
    }

    /// Same as [`from_cohort_scores`](Self::from_cohort_scores) over any
    /// sequence of equal-length score rows.
    pub(crate) fn from_rows<'a, I>(rows: I, detector_ids: &[String]) -> Result<Self>
    where
        I: Iterator<Item = &'a [T]> + Clone,
    {
        let s = detector_ids.len();
        let mut n = 0usize;
        let mut mu = vec![T::zero(); s];
        for row in rows.clone() {
            for (m, &y) in mu.iter_mut().zip(row) {
                *m = *m + y;
            }
            n += 1;
        }
        if n == 0 {
            return Err(Error::Empty("M-Norm cohort"));
        }
        let count = T::from_count(n);
        for m in &mut mu {
            *m = *m / count;
        }

        let mut sigma = vec![T::zero(); s];
        for row in rows {
            for ((v, &y), &m) in sigma.iter_mut().zip(row).zip(&mu) {
                let d = y - m;
                *v = *v + d * d;
            }
        }
        for v in &mut sigma {
            *v = (*v / count).sqrt();
        }

        let stats = Self {
            detector_ids: detector_ids.to_vec(),
            mu,
            sigma,
            cohort_size: n,
        };
        stats.check()?;
        Ok(stats)
    }

    /// Validates lengths and the sigma floor; used after deserialization too.
    pub fn check(&self) -> Result<()> {
        if self.mu.len() != self.detector_ids.len() || self.sigma.len() != self.detector_ids.len() {
            return Err(Error::Shape {
                context: "M-Norm statistics",
                expected: self.detector_ids.len(),
                found: self.mu.len().min(self.sigma.len()),
            });
        }
        if self.cohort_size == 0 {
            return Err(Error::Empty("M-Norm cohort"));
        }
        for (i, &s) in self.sigma.iter().enumerate() {
            if s.is_nan() || s.to_f64_lossless() < SIGMA_FLOOR || !self.mu[i].is_finite() {
                return Err(Error::DegenerateCohort {
                    index: i + 1,
                    speaker: self.detector_ids[i].clone(),
                    sigma: s.to_f64_lossless(),
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// Statistics restricted to the first `k` detectors.
    pub fn prefix(&self, k: usize) -> Self {
        Self {
            detector_ids: self.detector_ids[..k].to_vec(),
            mu: self.mu[..k].to_vec(),
            sigma: self.sigma[..k].to_vec(),
            cohort_size: self.cohort_size,
        }
    }
}

/// Scores `cohort` against `bank` and returns the per-detector statistics.
pub fn compute_mnorm_stats<T: Scalar>(bank: &DetectorBank<T>, cohort: &EmbeddingSet<T>) -> Result<MNormStats<T>> {
    MNormStats::from_cohort_scores(&score_all(bank, cohort)?)
}

/// Which parts of the normalization to apply.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMode {
    /// `(y - mu) / sigma`
    #[default]
    Full,
    /// `y - mu`
    ShiftOnly,
    /// `y / sigma`
    ScaleOnly,
    None,
}

impl NormMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NormMode::Full => "full",
            NormMode::ShiftOnly => "shift-only",
            NormMode::ScaleOnly => "scale-only",
            NormMode::None => "none",
        }
    }

    pub fn needs_stats(self) -> bool {
        self != NormMode::None
    }
}

impl fmt::Display for NormMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(NormMode::Full),
            "shift-only" => Ok(NormMode::ShiftOnly),
            "scale-only" => Ok(NormMode::ScaleOnly),
            "none" => Ok(NormMode::None),
            other => Err(Error::Config(format!(
                "unknown normalization mode `{other}` (expected full, shift-only, scale-only or none)"
            ))),
        }
    }
}

/// Full M-Norm: `out[t][i] = (in[t][i] - mu[i]) / sigma[i]`.
pub fn apply_mnorm<T: Scalar>(matrix: &ScoreMatrix<T>, stats: &MNormStats<T>) -> Result<ScoreMatrix<T>> {
    apply_norm(matrix, Some(stats), NormMode::Full)
}

/// Applies `mode`; `stats` may be absent only for [`NormMode::None`].
pub fn apply_norm<T: Scalar>(
    matrix: &ScoreMatrix<T>,
    stats: Option<&MNormStats<T>>,
    mode: NormMode,
) -> Result<ScoreMatrix<T>> {
    let stats = match (mode, stats) {
        (NormMode::None, _) => return Ok(matrix.clone()),
        (_, Some(s)) => s,
        (_, None) => return Err(Error::Config(format!("normalization mode `{mode}` needs M-Norm statistics"))),
    };
    if stats.len() != matrix.n_detectors() {
        return Err(Error::Shape {
            context: "M-Norm statistics vs score columns",
            expected: matrix.n_detectors(),
            found: stats.len(),
        });
    }
    let mut out = matrix.clone();
    let s = matrix.n_detectors();
    if s > 0 {
        for row in out.scores_mut().chunks_exact_mut(s) {
            for ((y, &mu), &sigma) in row.iter_mut().zip(&stats.mu).zip(&stats.sigma) {
                *y = normalize(*y, mu, sigma, mode);
            }
        }
    }
    out.check_finite()?;
    Ok(out)
}

#[inline]
pub(crate) fn normalize<T: Scalar>(y: T, mu: T, sigma: T, mode: NormMode) -> T {
    match mode {
        NormMode::Full => (y - mu) / sigma,
        NormMode::ShiftOnly => y - mu,
        NormMode::ScaleOnly => y / sigma,
        NormMode::None => y,
    }
}
