//! Batch cosine scoring of trials against every detector.
//!
//! Each score is a dot product accumulated in index order, so the blocked
//! kernel below returns exactly what a naive per-pair loop would, independent
//! of block sizes and of how rows are spread over threads.

use rayon::prelude::*;

use crate::bank::enroll::DetectorBank;
use crate::bank::scores::ScoreMatrix;
use crate::bank::vector::length_normalize_in_place;
use crate::error::{Error, Result};
use crate::io::embeddings::EmbeddingSet;
use crate::scalar::Scalar;

const TRIAL_BLOCK: usize = 8;
const DETECTOR_BLOCK: usize = 64;
/// Trials handed to one rayon task.
const TASK_ROWS: usize = 64;

/// Detector directions repacked into column panels of `DETECTOR_BLOCK`
/// models: panel `p` is a `dimension × width` row-major block.
struct Panels<T> {
    dimension: usize,
    detectors: usize,
    data: Vec<T>,
}

impl<T: Scalar> Panels<T> {
    fn pack(bank: &DetectorBank<T>) -> Self {
        let dimension = bank.dimension();
        let detectors = bank.len();
        let mut data = Vec::with_capacity(dimension * detectors);
        for start in (0..detectors).step_by(DETECTOR_BLOCK) {
            let models = &bank.models()[start..(start + DETECTOR_BLOCK).min(detectors)];
            for k in 0..dimension {
                data.extend(models.iter().map(|m| m.direction[k]));
            }
        }
        Self {
            dimension,
            detectors,
            data,
        }
    }

    /// Scores a block of at most `TRIAL_BLOCK` normalized trials into `out`
    /// (`rows × detectors`, row-major).
    fn score_block(&self, trials: &[T], out: &mut [T]) {
        let d = self.dimension;
        let s = self.detectors;
        let rows = trials.len() / d;
        debug_assert!(rows <= TRIAL_BLOCK && out.len() == rows * s);

        let mut acc = [[T::zero(); DETECTOR_BLOCK]; TRIAL_BLOCK];
        for start in (0..s).step_by(DETECTOR_BLOCK) {
            let width = DETECTOR_BLOCK.min(s - start);
            let panel = &self.data[start * d..(start + width) * d];
            for a in acc.iter_mut().take(rows) {
                a[..width].fill(T::zero());
            }
            for (k, column) in panel.chunks_exact(width).enumerate() {
                for (r, a) in acc.iter_mut().take(rows).enumerate() {
                    let x = trials[r * d + k];
                    for (aj, &m) in a[..width].iter_mut().zip(column) {
                        *aj = *aj + x * m;
                    }
                }
            }
            for (r, a) in acc.iter().take(rows).enumerate() {
                out[r * s + start..r * s + start + width].copy_from_slice(&a[..width]);
            }
        }
    }
}

/// Cosine scores of every trial against every detector:
/// `scores[t][i] = dot(length_normalize(trial_t), direction_i)`.
///
/// Work is split across the current rayon pool; the result does not depend
/// on the number of threads.
pub fn score_all<T: Scalar>(bank: &DetectorBank<T>, trials: &EmbeddingSet<T>) -> Result<ScoreMatrix<T>> {
    let d = bank.dimension();
    if trials.dimension() != d {
        return Err(Error::Shape {
            context: "trial dimension vs bank",
            expected: d,
            found: trials.dimension(),
        });
    }
    let mut normalized = trials.matrix().to_vec();
    for (t, v) in normalized.chunks_exact_mut(d).enumerate() {
        length_normalize_in_place(v).map_err(|_| Error::ZeroVector {
            what: format!("trial `{}`", trials.utterance_id(t)),
        })?;
    }

    let panels = Panels::pack(bank);
    let s = bank.len();
    let mut scores = vec![T::zero(); trials.len() * s];
    if s > 0 {
        scores
            .par_chunks_mut(TASK_ROWS * s)
            .zip(normalized.par_chunks(TASK_ROWS * d))
            .for_each(|(out, input)| {
                for (o, i) in out.chunks_mut(TRIAL_BLOCK * s).zip(input.chunks(TRIAL_BLOCK * d)) {
                    panels.score_block(i, o);
                }
            });
    }
    ScoreMatrix::new(trials.utterance_ids().to_vec(), bank.speaker_ids(), scores)
}
