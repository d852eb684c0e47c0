//! Multi-target (blacklist) speaker detection and identification.
//!
//! A bank of S enrolled speaker models scores every test embedding; the
//! maximum score `y*` and its detector `h*` drive two stacked detectors:
//! Top-S (is the speaker on the blacklist?) and Top-1 (which one?). The crate
//! covers the whole path from embedding files to EER/DET reports, plus a
//! synthetic population generator for the blacklist-size experiment.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the width for callers that do not care.

pub mod bank;
pub mod error;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod scalar;
pub mod synth;

pub use bank::{
    apply_mnorm, apply_norm, compute_mnorm_stats, enroll, length_normalize, score_all, DetectorBank, MNormStats,
    NormMode, ScoreMatrix, SpeakerModel,
};
pub use error::{Error, Result};
pub use io::{
    load_bank, load_embeddings, load_key, load_scores, save_bank, save_key, save_embeddings, save_scores, validate_partition, Embedding, EmbeddingSet,
    PartitionManifest,
};
pub use metrics::{
    det_points, eer_from_points, stack_reduce, sweep_top_1, sweep_top_s, DetectorReport, Mode, OperatingPoint,
    StackScore, ThresholdPolicy, TrialLabel, Truth,
};
pub use pipeline::{evaluate, evaluate_scores, Evaluation};
pub use scalar::Scalar;
pub use synth::{generate_population, run_size_sweep, PartitionSpec, PopulationConfig, SizeSweepResult, SweepConfig};

pub type EmbeddingSetF64 = EmbeddingSet<f64>;
pub type EmbeddingSetF32 = EmbeddingSet<f32>;
pub type DetectorBankF64 = DetectorBank<f64>;
pub type DetectorBankF32 = DetectorBank<f32>;
pub type ScoreMatrixF64 = ScoreMatrix<f64>;
pub type ScoreMatrixF32 = ScoreMatrix<f32>;
pub type MNormStatsF64 = MNormStats<f64>;
pub type MNormStatsF32 = MNormStats<f32>;
pub type DetectorReportF64 = DetectorReport<f64>;
pub type DetectorReportF32 = DetectorReport<f32>;
pub type StackScoreF64 = StackScore<f64>;
pub type SizeSweepResultF64 = SizeSweepResult<f64>;
