use std::collections::{HashMap, HashSet};

use crate::bank::mnorm::MNormStats;
use crate::bank::vector::{l2_norm, length_normalize_in_place};
use crate::error::{Error, Result};
use crate::io::embeddings::EmbeddingSet;
use crate::scalar::Scalar;

/// One enrolled blacklist speaker: a unit-length direction.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeakerModel<T> {
    pub speaker_id: String,
    pub direction: Vec<T>,
}

/// Ordered bank of S speaker models. Position `i` (0-based) is detector `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorBank<T> {
    models: Vec<SpeakerModel<T>>,
    dimension: usize,
    mnorm: Option<MNormStats<T>>,
}

impl<T: Scalar> DetectorBank<T> {
    /// Assembles a bank from existing models, checking shape, uniqueness and
    /// unit norm.
    pub fn from_models(models: Vec<SpeakerModel<T>>) -> Result<Self> {
        let dimension = models.first().ok_or(Error::Empty("detector bank"))?.direction.len();
        let mut ids = HashSet::new();
        for m in &models {
            if m.direction.len() != dimension {
                return Err(Error::Shape {
                    context: "model direction",
                    expected: dimension,
                    found: m.direction.len(),
                });
            }
            if !ids.insert(m.speaker_id.as_str()) {
                return Err(Error::DuplicateSpeaker(m.speaker_id.clone()));
            }
            let norm = l2_norm(&m.direction).to_f64_lossless();
            if norm.is_nan() || (norm - 1.0).abs() > T::UNIT_NORM_TOLERANCE {
                return Err(Error::NotUnit {
                    speaker: m.speaker_id.clone(),
                    norm,
                });
            }
        }
        Ok(Self {
            models,
            dimension,
            mnorm: None,
        })
    }

    /// Rebuilds a bank from an embedding set holding one labeled row per model.
    pub fn from_embedding_set(set: &EmbeddingSet<T>) -> Result<Self> {
        let models = set
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let speaker_id = e.speaker_id.ok_or_else(|| Error::Unlabeled {
                    row: i + 1,
                    id: e.utterance_id.to_owned(),
                })?;
                Ok(SpeakerModel {
                    speaker_id: speaker_id.to_owned(),
                    direction: e.vector.to_vec(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_models(models)
    }

    /// Model directions as an embedding set, utterance id = speaker id.
    pub fn to_embedding_set(&self) -> EmbeddingSet<T> {
        let mut set = EmbeddingSet::new(self.dimension).expect("bank dimension is positive");
        for m in &self.models {
            set.push_parts(m.speaker_id.clone(), Some(m.speaker_id.clone()), &m.direction)
                .expect("bank rows are valid embeddings");
        }
        set
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn models(&self) -> &[SpeakerModel<T>] {
        &self.models
    }

    pub fn speaker_ids(&self) -> Vec<String> {
        self.models.iter().map(|m| m.speaker_id.clone()).collect()
    }

    /// 0-based detector position of `speaker_id`.
    pub fn index_of(&self, speaker_id: &str) -> Option<usize> {
        self.models.iter().position(|m| m.speaker_id == speaker_id)
    }

    pub fn mnorm(&self) -> Option<&MNormStats<T>> {
        self.mnorm.as_ref()
    }

    pub fn set_mnorm(&mut self, stats: MNormStats<T>) -> Result<()> {
        if stats.len() != self.len() {
            return Err(Error::Shape {
                context: "M-Norm statistics",
                expected: self.len(),
                found: stats.len(),
            });
        }
        self.mnorm = Some(stats);
        Ok(())
    }

    /// The first `k` detectors. M-Norm statistics are dropped because they
    /// depend on the cohort of the full bank.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::Config(format!("bank prefix {k} outside 1..={}", self.len())));
        }
        Ok(Self {
            models: self.models[..k].to_vec(),
            dimension: self.dimension,
            mnorm: None,
        })
    }
}

/// Builds one model per distinct speaker, in order of first appearance
/// across `train` then `augment`.
///
/// Each model direction is the renormalized mean of the speaker's
/// length-normalized utterances.
pub fn enroll<T: Scalar>(train: &EmbeddingSet<T>, augment: Option<&EmbeddingSet<T>>) -> Result<DetectorBank<T>> {
    if train.is_empty() {
        return Err(Error::Empty("enrollment set"));
    }
    let dimension = train.dimension();
    if let Some(aug) = augment {
        if aug.dimension() != dimension {
            return Err(Error::Shape {
                context: "augmentation set",
                expected: dimension,
                found: aug.dimension(),
            });
        }
    }

    let mut order: Vec<String> = Vec::new();
    let mut slots: HashMap<String, usize> = HashMap::new();
    let mut sums: Vec<T> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    let mut unit = vec![T::zero(); dimension];

    for set in std::iter::once(train).chain(augment) {
        for (row, e) in set.iter().enumerate() {
            let speaker = e.speaker_id.ok_or_else(|| Error::Unlabeled {
                row: row + 1,
                id: e.utterance_id.to_owned(),
            })?;
            let slot = match slots.get(speaker) {
                Some(&s) => s,
                None => {
                    let s = order.len();
                    slots.insert(speaker.to_owned(), s);
                    order.push(speaker.to_owned());
                    sums.resize(sums.len() + dimension, T::zero());
                    counts.push(0);
                    s
                }
            };
            unit.copy_from_slice(e.vector);
            length_normalize_in_place(&mut unit).map_err(|_| Error::ZeroVector {
                what: format!("utterance `{}`", e.utterance_id),
            })?;
            for (acc, &u) in sums[slot * dimension..(slot + 1) * dimension].iter_mut().zip(&unit) {
                *acc = *acc + u;
            }
            counts[slot] += 1;
        }
    }

    let models = order
        .into_iter()
        .enumerate()
        .map(|(slot, speaker_id)| {
            let n = T::from_count(counts[slot]);
            let mut direction: Vec<T> = sums[slot * dimension..(slot + 1) * dimension]
                .iter()
                .map(|&s| s / n)
                .collect();
            length_normalize_in_place(&mut direction).map_err(|_| Error::ZeroVector {
                what: format!("mean of speaker `{speaker_id}`"),
            })?;
            Ok(SpeakerModel { speaker_id, direction })
        })
        .collect::<Result<Vec<_>>>()?;
    DetectorBank::from_models(models)
}
