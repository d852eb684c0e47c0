//! File formats: embedding CSV, score CSV, answer keys and partition manifests.

pub mod bank_files;
pub mod embeddings;
pub mod labels;
pub mod manifest;
pub mod scores;

pub use bank_files::{load_bank, save_bank, BANK_FILE, MNORM_FILE};
pub use embeddings::{load_embeddings, save_embeddings, Embedding, EmbeddingRef, EmbeddingSet, UNLABELED};
pub use labels::{load_key, save_key, KeyEntry};
pub use manifest::{
    background_speakers, validate_partition, Partition, PartitionManifest, ValidationReference, ValidationReport,
    Violation,
};
pub use scores::{load_scores, save_scores};
