use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Trials × detectors score table, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix<T> {
    trial_ids: Vec<String>,
    detector_ids: Vec<String>,
    scores: Vec<T>,
}

impl<T: Scalar> ScoreMatrix<T> {
    pub fn new(trial_ids: Vec<String>, detector_ids: Vec<String>, scores: Vec<T>) -> Result<Self> {
        let m = Self::new_unchecked(trial_ids, detector_ids, scores)?;
        m.check_finite()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(trial_ids: Vec<String>, detector_ids: Vec<String>, scores: Vec<T>) -> Result<Self> {
        let expected = trial_ids.len() * detector_ids.len();
        if scores.len() != expected {
            return Err(Error::Shape {
                context: "score matrix entries",
                expected,
                found: scores.len(),
            });
        }
        Ok(Self {
            trial_ids,
            detector_ids,
            scores,
        })
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.scores.iter().position(|s| !s.is_finite()) {
            None => Ok(()),
            Some(p) => Err(Error::NonFiniteScore {
                trial: p / self.n_detectors().max(1),
                detector: p % self.n_detectors().max(1),
            }),
        }
    }

    pub fn n_trials(&self) -> usize {
        self.trial_ids.len()
    }

    pub fn n_detectors(&self) -> usize {
        self.detector_ids.len()
    }

    pub fn trial_ids(&self) -> &[String] {
        &self.trial_ids
    }

    pub fn detector_ids(&self) -> &[String] {
        &self.detector_ids
    }

    #[inline]
    pub fn get(&self, trial: usize, detector: usize) -> T {
        self.scores[trial * self.n_detectors() + detector]
    }

    pub fn row(&self, trial: usize) -> &[T] {
        let s = self.n_detectors();
        &self.scores[trial * s..(trial + 1) * s]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[T]> + Clone + '_ {
        (0..self.n_trials()).map(move |t| self.row(t))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.scores
    }

    /// Mutable access to the raw entries. Finiteness is not re-validated
    /// here; `save_scores` checks it again before writing.
    pub fn scores_mut(&mut self) -> &mut [T] {
        &mut self.scores
    }

    /// Sub-matrix with the given trial rows and the first `detectors` columns.
    pub fn select(&self, trials: &[usize], detectors: usize) -> Result<Self> {
        if detectors > self.n_detectors() {
            return Err(Error::Shape {
                context: "detector prefix",
                expected: self.n_detectors(),
                found: detectors,
            });
        }
        let mut scores = Vec::with_capacity(trials.len() * detectors);
        let mut ids = Vec::with_capacity(trials.len());
        for &t in trials {
            scores.extend_from_slice(&self.row(t)[..detectors]);
            ids.push(self.trial_ids[t].clone());
        }
        Self::new_unchecked(ids, self.detector_ids[..detectors].to_vec(), scores)
    }
}
