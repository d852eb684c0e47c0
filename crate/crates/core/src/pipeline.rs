//! Score → normalize → stack → sweep, as run by the `eval` command.

use crate::bank::{apply_norm, score_all, DetectorBank, NormMode, ScoreMatrix};
use crate::error::{Error, Result};
use crate::io::embeddings::EmbeddingSet;
use crate::io::labels::KeyEntry;
use crate::metrics::{check_labels, resolve_labels, stack_reduce, sweep_both, DetectorReport, ThresholdPolicy};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<T> {
    pub top_s: DetectorReport<T>,
    pub top_1: DetectorReport<T>,
}

/// Raw cosine scores of `trials` with the bank's normalization applied.
pub fn normalized_scores<T: Scalar>(
    bank: &DetectorBank<T>,
    trials: &EmbeddingSet<T>,
    norm: NormMode,
) -> Result<ScoreMatrix<T>> {
    let raw = score_all(bank, trials)?;
    if norm.needs_stats() && bank.mnorm().is_none() {
        return Err(Error::Config(format!(
            "normalization `{norm}` requested but the bank has no M-Norm statistics"
        )));
    }
    apply_norm(&raw, bank.mnorm(), norm)
}

/// Evaluates an already scored (and normalized) matrix against an answer key.
pub fn evaluate_scores<T: Scalar>(scores: &ScoreMatrix<T>, key: &[KeyEntry]) -> Result<Evaluation<T>> {
    let labels = resolve_labels(scores.trial_ids(), key, scores.detector_ids())?;
    check_labels(&labels, scores.n_detectors())?;
    let stack = stack_reduce(scores)?;
    let (top_s, top_1) = sweep_both(&stack, &labels, &ThresholdPolicy::Observed)?;
    Ok(Evaluation { top_s, top_1 })
}

pub fn evaluate<T: Scalar>(
    bank: &DetectorBank<T>,
    trials: &EmbeddingSet<T>,
    key: &[KeyEntry],
    norm: NormMode,
) -> Result<Evaluation<T>> {
    evaluate_scores(&normalized_scores(bank, trials, norm)?, key)
}
