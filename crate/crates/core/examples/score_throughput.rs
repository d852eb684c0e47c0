//! Times full-size scoring: the 16,017-utterance test set against a 3,631-speaker bank.

use std::time::Instant;

use multitarget::io::Partition;
use multitarget::synth::{generate_partition, PartitionSpec, PopulationConfig};
use multitarget::{enroll, score_all, EmbeddingSetF64};

fn main() -> multitarget::Result<()> {
    let config = PopulationConfig::default();
    let t0 = Instant::now();
    let mut train_spec = PartitionSpec::full_train();
    train_spec.background_speakers = 0;
    train_spec.background_total_utts = None;
    let train: EmbeddingSetF64 = generate_partition(&config, Partition::Train, &train_spec)?;
    let test: EmbeddingSetF64 = generate_partition(&config, Partition::Test, &PartitionSpec::full_test())?;
    println!("generated {} + {} utterances in {:?}", train.len(), test.len(), t0.elapsed());

    let bank = enroll(&train, None)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
    let t1 = Instant::now();
    let scores = pool.install(|| score_all(&bank, &test))?;
    println!(
        "scored {} x {} x {} single-threaded in {:?}",
        scores.n_trials(),
        scores.n_detectors(),
        bank.dimension(),
        t1.elapsed()
    );
    Ok(())
}
