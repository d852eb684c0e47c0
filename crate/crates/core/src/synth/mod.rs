//! Synthetic populations and the blacklist-size experiment.

pub mod population;
pub mod sweep;

pub use population::{
    answer_key, background_speaker_id, blacklist_speaker_id, generate_partition, generate_population,
    replicate_seed, PartitionSpec, Population, PopulationConfig, PopulationSpec,
};
pub use sweep::{
    run_replicate, run_size_sweep, ReplicateResult, SizeSweepResult, SizeSweepRow, SweepConfig, DEFAULT_REPLICATES,
    DEFAULT_SIZES,
};
