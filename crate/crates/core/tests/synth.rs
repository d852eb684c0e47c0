use std::collections::BTreeSet;

use multitarget::bank::{enroll, score_all, NormMode};
use multitarget::io::{background_speakers, validate_partition, Partition, ValidationReference};
use multitarget::synth::{
    answer_key, generate_partition, generate_population, run_size_sweep, PartitionSpec, PopulationConfig,
    PopulationSpec, SweepConfig,
};
use multitarget::{evaluate, EmbeddingSetF64};

fn small_population() -> PopulationConfig {
    PopulationConfig {
        dimension: 2,
        ..PopulationConfig::default()
    }
}

#[test]
fn full_scale_population_passes_validation() {
    let spec = PopulationSpec::full();
    let pop = generate_population::<f64>(&small_population(), &spec).unwrap();
    assert_eq!(pop.blacklist.len(), 3631);
    let train_bg = background_speakers(&pop.train, &pop.blacklist);
    assert_eq!(train_bg.len(), 5000);

    let expected = [
        (Partition::Train, 3631, 5000, 41_845),
        (Partition::Dev, 3631, 5000, 8_631),
        (Partition::Test, 3631, 12_386, 16_017),
    ];
    for (p, bl, bg, total) in expected {
        let foreign = (p != Partition::Train).then_some(&train_bg);
        let report = validate_partition(
            pop.get(p),
            &spec.get(p).manifest(p),
            ValidationReference {
                blacklist: &pop.blacklist,
                foreign_background: foreign,
            },
        );
        assert!(report.passed(), "{p}: {:?}", report.violations);
        assert_eq!(
            (report.blacklist_speakers, report.background_speakers, report.total_utterances),
            (bl, bg, total)
        );
    }
}

#[test]
fn reused_background_id_is_reported_once() {
    let config = small_population();
    let train = generate_partition::<f64>(&config, Partition::Train, &PartitionSpec {
        blacklist_speakers: 3,
        background_speakers: 4,
        blacklist_utts_per_speaker: 3,
        background_utts_per_speaker: 2,
        background_total_utts: None,
    })
    .unwrap();
    let blacklist: BTreeSet<String> = train.speakers().iter().take(3).map(|s| s.to_string()).collect();
    let train_bg = background_speakers(&train, &blacklist);
    let copied = train_bg.iter().next().unwrap().clone();

    let dev_spec = PartitionSpec {
        blacklist_speakers: 3,
        background_speakers: 2,
        blacklist_utts_per_speaker: 1,
        background_utts_per_speaker: 1,
        background_total_utts: None,
    };
    let dev = generate_partition::<f64>(&config, Partition::Dev, &dev_spec).unwrap();
    // Label the first background row with a train background id.
    let relabeled = EmbeddingSetF64::from_embeddings(dev.iter().enumerate().map(|(i, e)| {
        let speaker = if i == 3 { Some(copied.as_str()) } else { e.speaker_id };
        multitarget::io::Embedding::new(e.utterance_id, speaker, e.vector.to_vec())
    }))
    .unwrap();
    let reference = ValidationReference {
        blacklist: &blacklist,
        foreign_background: Some(&train_bg),
    };
    let report = validate_partition(&relabeled, &dev_spec.manifest(Partition::Dev), reference);
    let overlap = background_speakers(&relabeled, &blacklist).intersection(&train_bg).count();
    assert_eq!(overlap, 1);
    assert_eq!(report.violations.len(), 1, "{:?}", report.violations);
    assert!(validate_partition(&dev, &dev_spec.manifest(Partition::Dev), reference).passed());
}

#[test]
fn same_seed_is_bit_identical_and_seeds_differ() {
    let spec = PartitionSpec {
        blacklist_speakers: 5,
        background_speakers: 7,
        blacklist_utts_per_speaker: 2,
        background_utts_per_speaker: 3,
        background_total_utts: None,
    };
    let config = PopulationConfig { dimension: 9, ..Default::default() };
    let a = generate_partition::<f64>(&config, Partition::Test, &spec).unwrap();
    let b = generate_partition::<f64>(&config, Partition::Test, &spec).unwrap();
    assert_eq!(a, b);
    let c = generate_partition::<f64>(&PopulationConfig { seed: 1, ..config.clone() }, Partition::Test, &spec).unwrap();
    assert_ne!(a.matrix(), c.matrix());
}

#[test]
fn blacklist_rows_do_not_depend_on_population_size() {
    let config = PopulationConfig { dimension: 5, ..Default::default() };
    let spec = |n| PartitionSpec {
        blacklist_speakers: n,
        background_speakers: 2,
        blacklist_utts_per_speaker: 2,
        background_utts_per_speaker: 1,
        background_total_utts: None,
    };
    let small = generate_partition::<f64>(&config, Partition::Train, &spec(3)).unwrap();
    let large = generate_partition::<f64>(&config, Partition::Train, &spec(8)).unwrap();
    assert_eq!(&small.matrix()[..6 * 5], &large.matrix()[..6 * 5]);
}

#[test]
fn noiseless_channels_make_identification_perfect() {
    let config = PopulationConfig {
        dimension: 16,
        channel_spread: 0.0,
        ..Default::default()
    };
    let mut spec = PopulationSpec::full();
    spec.train = PartitionSpec {
        blacklist_speakers: 40,
        background_speakers: 0,
        blacklist_utts_per_speaker: 3,
        background_utts_per_speaker: 0,
        background_total_utts: None,
    };
    spec.dev = PartitionSpec { blacklist_speakers: 40, background_speakers: 1, ..PartitionSpec::full_dev() };
    spec.test = PartitionSpec { blacklist_speakers: 40, background_speakers: 60, ..PartitionSpec::full_test() };
    let pop = generate_population::<f64>(&config, &spec).unwrap();
    for s in 0..40 {
        for u in 1..3 {
            assert_eq!(pop.train.vector(3 * s), pop.train.vector(3 * s + u));
        }
    }
    let bank = enroll(&pop.train, None).unwrap();
    let scores = score_all(&bank, &pop.test).unwrap();
    for t in 0..40 {
        for i in 0..40 {
            let y = scores.get(t, i);
            if i == t {
                assert!((y - 1.0).abs() < 1e-12);
            } else {
                assert!(y < 1.0 - 1e-9);
            }
        }
    }
    let ev = evaluate(&bank, &pop.test, &answer_key(&pop.test, &pop.blacklist), NormMode::None).unwrap();
    assert_eq!(ev.top_1.eer, 0.0);
}

fn tiny_sweep() -> SweepConfig {
    SweepConfig {
        population: PopulationConfig { dimension: 24, ..Default::default() },
        sizes: vec![1, 5, 20],
        replicates: 3,
        test: PartitionSpec {
            blacklist_speakers: 20,
            background_speakers: 80,
            ..PartitionSpec::full_test()
        },
        ..Default::default()
    }
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let config = tiny_sweep();
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let a = pool(1).install(|| run_size_sweep::<f64>(&config).unwrap());
    let b = pool(3).install(|| run_size_sweep::<f64>(&config).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.rows.len(), 3);
    assert_eq!(a.replicate_count, 3);
    for row in &a.rows {
        assert!(row.top_1_eer >= row.top_s_eer);
        assert!((0.0..=1.0).contains(&row.top_s_eer));
    }
    let first = &a.rows[0];
    assert_eq!(first.top_1_eer, first.top_s_eer);
}

#[test]
fn sweep_rejects_oversized_blacklists() {
    let mut config = tiny_sweep();
    config.sizes = vec![5, 21];
    assert!(run_size_sweep::<f64>(&config).is_err());
    config.sizes = vec![5, 2];
    assert!(run_size_sweep::<f64>(&config).is_err());
}
