//! Blacklist-size experiment: one fixed test set, growing enrolled blacklists.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bank::mnorm::{normalize, MNormStats, NormMode};
use crate::bank::{enroll, score_all, ScoreMatrix};
use crate::error::{Error, Result};
use crate::io::manifest::Partition;
use crate::metrics::stack::reduce_row;
use crate::metrics::{sweep_both, StackScore, ThresholdPolicy, TrialLabel, Truth};
use crate::scalar::Scalar;
use crate::synth::population::{generate_partition, replicate_seed, PartitionSpec, PopulationConfig};

pub const DEFAULT_SIZES: [usize; 6] = [10, 50, 100, 500, 1000, 3631];
pub const DEFAULT_REPLICATES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub population: PopulationConfig,
    pub sizes: Vec<usize>,
    pub replicates: usize,
    /// Train utterances per blacklist speaker used for enrollment and the
    /// M-Norm cohort.
    pub enroll_utts_per_speaker: usize,
    pub test: PartitionSpec,
    pub norm: NormMode,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            population: PopulationConfig::default(),
            sizes: DEFAULT_SIZES.to_vec(),
            replicates: DEFAULT_REPLICATES,
            enroll_utts_per_speaker: 3,
            test: PartitionSpec::full_test(),
            norm: NormMode::Full,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.population.validate()?;
        self.test.validate()?;
        if self.sizes.is_empty() {
            return Err(Error::Config("size list is empty".into()));
        }
        if self.sizes.contains(&0) {
            return Err(Error::Config("blacklist sizes must be positive".into()));
        }
        if self.sizes.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Config("blacklist sizes must be nondecreasing".into()));
        }
        let max = *self.sizes.last().expect("non-empty");
        if max > self.test.blacklist_speakers {
            return Err(Error::Config(format!(
                "size {max} exceeds the blacklist population of {}",
                self.test.blacklist_speakers
            )));
        }
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be positive".into()));
        }
        if self.enroll_utts_per_speaker == 0 {
            return Err(Error::Config("enrollment needs at least one utterance per speaker".into()));
        }
        if self.test.background_speakers == 0 {
            return Err(Error::Config("the test set needs background speakers".into()));
        }
        Ok(())
    }

    fn max_size(&self) -> usize {
        *self.sizes.last().expect("validated")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SizeSweepRow<T> {
    pub blacklist_size: usize,
    pub top_s_eer: T,
    pub top_1_eer: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ReplicateResult<T> {
    pub replicate: usize,
    pub seed: u64,
    pub rows: Vec<SizeSweepRow<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SizeSweepResult<T> {
    /// Per-size means over replicates.
    pub rows: Vec<SizeSweepRow<T>>,
    pub replicate_count: usize,
    pub replicates: Vec<ReplicateResult<T>>,
}

/// Runs every replicate (in parallel on the current rayon pool) and averages
/// the per-size EERs in replicate order.
pub fn run_size_sweep<T: Scalar>(config: &SweepConfig) -> Result<SizeSweepResult<T>> {
    config.validate()?;
    let replicates = (0..config.replicates)
        .into_par_iter()
        .map(|r| run_replicate(config, r))
        .collect::<Result<Vec<_>>>()?;

    let count = T::from_count(replicates.len());
    let rows = config
        .sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| {
            let (s, one) = replicates.iter().fold((T::zero(), T::zero()), |(s, one), r| {
                (s + r.rows[i].top_s_eer, one + r.rows[i].top_1_eer)
            });
            SizeSweepRow {
                blacklist_size: size,
                top_s_eer: s / count,
                top_1_eer: one / count,
            }
        })
        .collect();
    Ok(SizeSweepResult {
        rows,
        replicate_count: replicates.len(),
        replicates,
    })
}

/// One replicate. The largest bank is enrolled and scored once; the size-k
/// experiment reads the first k detector columns, which is exactly what a
/// bank enrolled from the first k speakers would score.
pub fn run_replicate<T: Scalar>(config: &SweepConfig, replicate: usize) -> Result<ReplicateResult<T>> {
    config.validate()?;
    let seed = replicate_seed(config.population.seed, replicate);
    let population = PopulationConfig {
        seed,
        ..config.population.clone()
    };
    let max = config.max_size();
    let per_speaker = config.enroll_utts_per_speaker;

    let train_spec = PartitionSpec {
        blacklist_speakers: max,
        background_speakers: 0,
        blacklist_utts_per_speaker: per_speaker,
        background_utts_per_speaker: 0,
        background_total_utts: None,
    };
    let test_spec = PartitionSpec {
        blacklist_speakers: max,
        ..config.test.clone()
    };
    let train = generate_partition::<T>(&population, Partition::Train, &train_spec)?;
    let test = generate_partition::<T>(&population, Partition::Test, &test_spec)?;

    let bank = enroll(&train, None)?;
    let test_scores = score_all(&bank, &test)?;
    let cohort_scores = if config.norm.needs_stats() {
        Some(score_all(&bank, &train)?)
    } else {
        None
    };

    let per_test = test_spec.blacklist_utts_per_speaker;
    let blacklist_rows = max * per_test;
    let background_rows: Vec<usize> = (blacklist_rows..test.len()).collect();

    let rows = config
        .sizes
        .iter()
        .map(|&k| {
            let stats = cohort_scores
                .as_ref()
                .map(|c| {
                    MNormStats::from_rows(
                        c.rows().take(k * per_speaker).map(|r| &r[..k]),
                        &c.detector_ids()[..k],
                    )
                })
                .transpose()?;
            let trials: Vec<usize> = (0..k * per_test).chain(background_rows.iter().copied()).collect();
            let labels: Vec<TrialLabel> = trials
                .iter()
                .map(|&t| TrialLabel {
                    utterance_id: test.utterance_id(t).to_owned(),
                    truth: if t < blacklist_rows {
                        Truth::Blacklist(t / per_test)
                    } else {
                        Truth::Background
                    },
                })
                .collect();
            let stack = stack_prefix(&test_scores, &trials, k, stats.as_ref(), config.norm);
            let (top_s, top_1) = sweep_both(&stack, &labels, &ThresholdPolicy::Observed)?;
            Ok(SizeSweepRow {
                blacklist_size: k,
                top_s_eer: top_s.eer,
                top_1_eer: top_1.eer,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ReplicateResult { replicate, seed, rows })
}

/// `stack_reduce(apply_norm(select(matrix, trials, k)))` without
/// materializing the sub-matrix.
fn stack_prefix<T: Scalar>(
    matrix: &ScoreMatrix<T>,
    trials: &[usize],
    k: usize,
    stats: Option<&MNormStats<T>>,
    mode: NormMode,
) -> Vec<StackScore<T>> {
    let mut buf = vec![T::zero(); k];
    trials
        .iter()
        .map(|&t| {
            let row = &matrix.row(t)[..k];
            match stats {
                Some(s) if mode.needs_stats() => {
                    for (i, b) in buf.iter_mut().enumerate() {
                        *b = normalize(row[i], s.mu[i], s.sigma[i], mode);
                    }
                    reduce_row(&buf)
                }
                _ => reduce_row(row),
            }
        })
        .collect()
}
