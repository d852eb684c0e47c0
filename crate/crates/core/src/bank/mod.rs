//! Detector bank: enrollment, cosine scoring and M-Norm.

pub mod enroll;
pub mod mnorm;
pub mod score;
pub mod scores;
pub mod vector;

pub use enroll::{enroll, DetectorBank, SpeakerModel};
pub use mnorm::{apply_mnorm, apply_norm, compute_mnorm_stats, MNormStats, NormMode};
pub use score::score_all;
pub use scores::ScoreMatrix;
pub use vector::{dot, length_normalize};
