use std::collections::HashMap;

use crate::bank::scores::ScoreMatrix;
use crate::error::{Error, Result};
use crate::io::labels::KeyEntry;
use crate::metrics::types::{StackScore, TrialLabel, Truth};
use crate::scalar::Scalar;

/// Per-trial maximum score and arg-max detector.
pub fn stack_reduce<T: Scalar>(matrix: &ScoreMatrix<T>) -> Result<Vec<StackScore<T>>> {
    if matrix.n_detectors() == 0 {
        return Err(Error::Empty("detector set"));
    }
    if matrix.n_trials() == 0 {
        return Err(Error::Empty("trial set"));
    }
    matrix.check_finite()?;
    Ok(matrix.rows().map(reduce_row).collect())
}

#[inline]
pub(crate) fn reduce_row<T: Scalar>(row: &[T]) -> StackScore<T> {
    let mut best = StackScore {
        y_star: row[0],
        h_star: 0,
    };
    for (i, &y) in row.iter().enumerate().skip(1) {
        if y > best.y_star {
            best = StackScore { y_star: y, h_star: i };
        }
    }
    best
}

/// Resolves an answer key against the trial order of a score matrix and the
/// speaker ordering of the bank that produced it.
pub fn resolve_labels(trial_ids: &[String], key: &[KeyEntry], detector_ids: &[String]) -> Result<Vec<TrialLabel>> {
    let by_trial: HashMap<&str, Option<&str>> = key
        .iter()
        .map(|e| (e.utterance_id.as_str(), e.speaker_id.as_deref()))
        .collect();
    let by_speaker: HashMap<&str, usize> = detector_ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    trial_ids
        .iter()
        .map(|t| {
            let truth = match by_trial.get(t.as_str()) {
                None => return Err(Error::MissingLabel(t.clone())),
                Some(None) => Truth::Background,
                Some(Some(s)) => Truth::Blacklist(*by_speaker.get(s).ok_or_else(|| Error::UnknownDetector {
                    trial: t.clone(),
                    speaker: (*s).to_owned(),
                })?),
            };
            Ok(TrialLabel {
                utterance_id: t.clone(),
                truth,
            })
        })
        .collect()
}

/// Checks that every blacklist truth names one of `detectors` bank positions.
pub fn check_labels(labels: &[TrialLabel], detectors: usize) -> Result<()> {
    for l in labels {
        if let Truth::Blacklist(k) = l.truth {
            if k >= detectors {
                return Err(Error::TruthOutOfRange {
                    index: k + 1,
                    detectors,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[f64]]) -> ScoreMatrix<f64> {
        let s = rows[0].len();
        ScoreMatrix::new(
            (0..rows.len()).map(|i| format!("t{i}")).collect(),
            (0..s).map(|i| format!("d{i}")).collect(),
            rows.concat(),
        )
        .unwrap()
    }

    #[test]
    fn max_and_lowest_index_tie_break() {
        let st = stack_reduce(&matrix(&[&[0.5, 0.9], &[0.3, 0.3]])).unwrap();
        assert_eq!(st[0], StackScore { y_star: 0.9, h_star: 1 });
        assert_eq!(st[1], StackScore { y_star: 0.3, h_star: 0 });
    }

    #[test]
    fn empty_detector_set_is_an_error() {
        let m = ScoreMatrix::<f64>::new(vec!["t".into()], vec![], vec![]).unwrap();
        assert!(matches!(stack_reduce(&m), Err(Error::Empty(_))));
    }

    #[test]
    fn labels_resolve_against_bank_order() {
        let key = vec![
            KeyEntry { utterance_id: "t1".into(), speaker_id: Some("b".into()) },
            KeyEntry { utterance_id: "t0".into(), speaker_id: None },
        ];
        let labels = resolve_labels(&["t0".into(), "t1".into()], &key, &["a".into(), "b".into()]).unwrap();
        assert_eq!(labels[0].truth, Truth::Background);
        assert_eq!(labels[1].truth, Truth::Blacklist(1));

        assert!(matches!(
            resolve_labels(&["t9".into()], &key, &["a".into()]),
            Err(Error::MissingLabel(_))
        ));
        assert!(matches!(
            resolve_labels(&["t1".into()], &key, &["a".into()]),
            Err(Error::UnknownDetector { .. })
        ));
        let bad = [TrialLabel { utterance_id: "x".into(), truth: Truth::Blacklist(2) }];
        assert!(matches!(check_labels(&bad, 2), Err(Error::TruthOutOfRange { index: 3, detectors: 2 })));
    }
}
