//! Isotropic Gaussian speaker populations shaped like a large watchlist corpus.
//!
//! Speaker means are drawn componentwise from `N(0, speaker_spread²)` and each
//! utterance adds `N(0, channel_spread²)` noise. Every speaker owns its own
//! ChaCha stream keyed by (role, partition, index), so any subset of the
//! population can be generated on its own and still match the full draw.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::embeddings::EmbeddingSet;
use crate::io::labels::KeyEntry;
use crate::io::manifest::{Partition, PartitionManifest};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationConfig {
    pub dimension: usize,
    pub speaker_spread: f64,
    pub channel_spread: f64,
    pub seed: u64,
}

impl Default for PopulationConfig {
    fn default() -> Self {
        Self {
            dimension: 600,
            speaker_spread: 1.0,
            channel_spread: 2.5,
            seed: 2018,
        }
    }
}

impl PopulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dimension < 2 {
            return Err(Error::Config(format!("dimension must be at least 2, got {}", self.dimension)));
        }
        if !(self.speaker_spread > 0.0 && self.speaker_spread.is_finite()) {
            return Err(Error::Config(format!("speaker_spread must be positive, got {}", self.speaker_spread)));
        }
        if !(self.channel_spread >= 0.0 && self.channel_spread.is_finite()) {
            return Err(Error::Config(format!("channel_spread must be non-negative, got {}", self.channel_spread)));
        }
        Ok(())
    }
}

/// Speaker and utterance counts of one partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub blacklist_speakers: usize,
    pub background_speakers: usize,
    pub blacklist_utts_per_speaker: usize,
    /// Minimum utterances per background speaker.
    pub background_utts_per_speaker: usize,
    /// Total background utterances, spread as evenly as possible with the
    /// first speakers taking the remainder. `None` means exactly
    /// `background_utts_per_speaker` each.
    pub background_total_utts: Option<usize>,
}

impl PartitionSpec {
    pub fn full_train() -> Self {
        Self {
            blacklist_speakers: 3631,
            background_speakers: 5000,
            blacklist_utts_per_speaker: 3,
            background_utts_per_speaker: 4,
            background_total_utts: Some(30_952),
        }
    }

    pub fn full_dev() -> Self {
        Self {
            blacklist_speakers: 3631,
            background_speakers: 5000,
            blacklist_utts_per_speaker: 1,
            background_utts_per_speaker: 1,
            background_total_utts: None,
        }
    }

    pub fn full_test() -> Self {
        Self {
            blacklist_speakers: 3631,
            background_speakers: 12_386,
            blacklist_utts_per_speaker: 1,
            background_utts_per_speaker: 1,
            background_total_utts: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.blacklist_speakers > 0 && self.blacklist_utts_per_speaker == 0 {
            return Err(Error::Config("blacklist speakers need at least one utterance each".into()));
        }
        if self.background_speakers > 0 && self.background_utts_per_speaker == 0 {
            return Err(Error::Config("background speakers need at least one utterance each".into()));
        }
        if let Some(total) = self.background_total_utts {
            let min = self.background_speakers * self.background_utts_per_speaker;
            if total < min {
                return Err(Error::Config(format!(
                    "background_total_utts {total} is below {} speakers × {} utterances",
                    self.background_speakers, self.background_utts_per_speaker
                )));
            }
            if self.background_speakers == 0 && total > 0 {
                return Err(Error::Config("background utterances without background speakers".into()));
            }
        }
        if self.total_utterances() == 0 {
            return Err(Error::Config("partition has no utterances".into()));
        }
        Ok(())
    }

    /// Utterance count of background speaker `j`.
    pub fn background_utts(&self, j: usize) -> usize {
        match self.background_total_utts {
            None => self.background_utts_per_speaker,
            Some(total) => {
                let n = self.background_speakers;
                total / n + usize::from(j < total % n)
            }
        }
    }

    pub fn blacklist_total(&self) -> usize {
        self.blacklist_speakers * self.blacklist_utts_per_speaker
    }

    pub fn background_total(&self) -> usize {
        self.background_total_utts
            .unwrap_or(self.background_speakers * self.background_utts_per_speaker)
    }

    pub fn total_utterances(&self) -> usize {
        self.blacklist_total() + self.background_total()
    }

    /// The manifest a partition generated from this spec must satisfy.
    pub fn manifest(&self, partition: Partition) -> PartitionManifest {
        PartitionManifest {
            partition_name: partition,
            blacklist_speaker_count: self.blacklist_speakers,
            background_speaker_count: self.background_speakers,
            min_utterances_per_blacklist_speaker: self.blacklist_utts_per_speaker.max(1),
            total_utterances: self.total_utterances(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PopulationSpec {
    pub train: PartitionSpec,
    pub dev: PartitionSpec,
    pub test: PartitionSpec,
}

impl PopulationSpec {
    pub fn full() -> Self {
        Self {
            train: PartitionSpec::full_train(),
            dev: PartitionSpec::full_dev(),
            test: PartitionSpec::full_test(),
        }
    }

    pub fn get(&self, partition: Partition) -> &PartitionSpec {
        match partition {
            Partition::Train => &self.train,
            Partition::Dev => &self.dev,
            Partition::Test => &self.test,
        }
    }
}

pub fn blacklist_speaker_id(i: usize) -> String {
    format!("bl{:05}", i + 1)
}

pub fn background_speaker_id(partition: Partition, j: usize) -> String {
    format!("bg_{partition}_{:05}", j + 1)
}

const BLACKLIST_MEAN: u64 = 1;
const BACKGROUND_MEAN: u64 = 2;
const BLACKLIST_UTTS: u64 = 3;
const BACKGROUND_UTTS: u64 = 4;
const REPLICATE: u64 = 5;

fn partition_code(p: Partition) -> u64 {
    match p {
        Partition::Train => 1,
        Partition::Dev => 2,
        Partition::Test => 3,
    }
}

fn stream(seed: u64, kind: u64, partition: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((kind << 56) | (partition << 48) | index as u64);
    rng
}

/// Seed of replicate `index`, drawn from its own stream of `seed`.
pub fn replicate_seed(seed: u64, index: usize) -> u64 {
    stream(seed, REPLICATE, 0, index).next_u64()
}

fn draw(rng: &mut ChaCha8Rng, spread: f64, out: &mut [f64]) {
    for v in out {
        let z: f64 = StandardNormal.sample(rng);
        *v = spread * z;
    }
}

/// Generates the utterances of one partition: blacklist speakers in roster
/// order, then background speakers, each speaker's utterances consecutive.
///
/// Blacklist speakers are labeled everywhere; background speakers are
/// labeled in train only.
pub fn generate_partition<T: Scalar>(
    config: &PopulationConfig,
    partition: Partition,
    spec: &PartitionSpec,
) -> Result<EmbeddingSet<T>> {
    config.validate()?;
    spec.validate()?;
    let d = config.dimension;
    let p = partition_code(partition);
    let mut set = EmbeddingSet::new(d)?;
    let mut mean = vec![0.0f64; d];
    let mut noise = vec![0.0f64; d];
    let mut row: Vec<T> = vec![T::zero(); d];

    let mut emit = |set: &mut EmbeddingSet<T>,
                    mean: &[f64],
                    utts: usize,
                    mut rng: ChaCha8Rng,
                    speaker: &str,
                    label: Option<String>|
     -> Result<()> {
        for u in 0..utts {
            draw(&mut rng, config.channel_spread, &mut noise);
            for ((r, &m), &n) in row.iter_mut().zip(mean).zip(noise.iter()) {
                *r = T::from_f64(m + n).ok_or_else(|| Error::Config("sample not representable".into()))?;
            }
            set.push_parts(format!("{partition}_{speaker}_{}", u + 1), label.clone(), &row)?;
        }
        Ok(())
    };

    for i in 0..spec.blacklist_speakers {
        draw(&mut stream(config.seed, BLACKLIST_MEAN, 0, i), config.speaker_spread, &mut mean);
        let id = blacklist_speaker_id(i);
        emit(
            &mut set,
            &mean,
            spec.blacklist_utts_per_speaker,
            stream(config.seed, BLACKLIST_UTTS, p, i),
            &id,
            Some(id.clone()),
        )?;
    }
    for j in 0..spec.background_speakers {
        draw(&mut stream(config.seed, BACKGROUND_MEAN, p, j), config.speaker_spread, &mut mean);
        let id = background_speaker_id(partition, j);
        let label = (partition == Partition::Train).then(|| id.clone());
        emit(&mut set, &mean, spec.background_utts(j), stream(config.seed, BACKGROUND_UTTS, p, j), &id, label)?;
    }
    Ok(set)
}

/// Train, dev and test partitions sharing one blacklist roster.
#[derive(Debug, Clone, PartialEq)]
pub struct Population<T> {
    pub train: EmbeddingSet<T>,
    pub dev: EmbeddingSet<T>,
    pub test: EmbeddingSet<T>,
    pub blacklist: BTreeSet<String>,
}

impl<T: Scalar> Population<T> {
    pub fn get(&self, partition: Partition) -> &EmbeddingSet<T> {
        match partition {
            Partition::Train => &self.train,
            Partition::Dev => &self.dev,
            Partition::Test => &self.test,
        }
    }
}

pub fn generate_population<T: Scalar>(config: &PopulationConfig, spec: &PopulationSpec) -> Result<Population<T>> {
    let roster = spec.train.blacklist_speakers;
    for p in [Partition::Dev, Partition::Test] {
        if spec.get(p).blacklist_speakers > roster {
            return Err(Error::Config(format!(
                "{p} has {} blacklist speakers but train only enrolls {roster}",
                spec.get(p).blacklist_speakers
            )));
        }
    }
    Ok(Population {
        train: generate_partition(config, Partition::Train, &spec.train)?,
        dev: generate_partition(config, Partition::Dev, &spec.dev)?,
        test: generate_partition(config, Partition::Test, &spec.test)?,
        blacklist: (0..roster).map(blacklist_speaker_id).collect(),
    })
}

/// Answer key of a set: blacklist rows keep their speaker, all others `-`.
pub fn answer_key<T: Scalar>(set: &EmbeddingSet<T>, blacklist: &BTreeSet<String>) -> Vec<KeyEntry> {
    set.iter()
        .map(|e| KeyEntry {
            utterance_id: e.utterance_id.to_owned(),
            speaker_id: e.speaker_id.filter(|s| blacklist.contains(*s)).map(str::to_owned),
        })
        .collect()
}
