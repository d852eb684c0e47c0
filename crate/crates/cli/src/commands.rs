use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use multitarget::io::{
    background_speakers, load_bank, load_embeddings, load_key, save_bank, save_embeddings, save_key, save_scores,
    validate_partition, Partition, PartitionManifest, ValidationReference,
};
use multitarget::metrics::{det_points, save_det_csv};
use multitarget::pipeline::{evaluate_scores, normalized_scores};
use multitarget::synth::{
    answer_key, blacklist_speaker_id, generate_population, run_size_sweep, PartitionSpec, PopulationConfig,
    PopulationSpec, SizeSweepResult, SweepConfig,
};
use multitarget::{compute_mnorm_stats, enroll as enroll_bank, DetectorBankF64, DetectorReportF64, EmbeddingSetF64};

use crate::args::{EnrollArgs, EvalArgs, GenerateArgs, PopulationArgs, ScoreArgs, SimulateArgs, ValidateArgs};

pub const SCHEMA_VERSION: u32 = 1;

fn population_config(a: &PopulationArgs) -> PopulationConfig {
    PopulationConfig {
        dimension: a.dimension,
        speaker_spread: a.speaker_spread,
        channel_spread: a.channel_spread,
        seed: a.seed,
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn read_roster(path: &Path) -> Result<BTreeSet<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let roster: BTreeSet<String> = text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::to_owned).collect();
    if roster.is_empty() {
        bail!("{}: blacklist roster is empty", path.display());
    }
    Ok(roster)
}

fn load_set(path: &Path, dimension: Option<usize>) -> Result<EmbeddingSetF64> {
    load_embeddings(path, dimension).with_context(|| format!("loading {}", path.display()))
}

pub fn generate(a: GenerateArgs) -> Result<()> {
    let config = population_config(&a.population);
    let spec = PopulationSpec {
        train: PartitionSpec {
            blacklist_speakers: a.blacklist,
            background_speakers: a.train_background,
            blacklist_utts_per_speaker: 3,
            background_utts_per_speaker: 4,
            background_total_utts: Some(a.train_background_utts),
        },
        dev: PartitionSpec {
            blacklist_speakers: a.blacklist,
            background_speakers: a.dev_background,
            ..PartitionSpec::full_dev()
        },
        test: PartitionSpec {
            blacklist_speakers: a.blacklist,
            background_speakers: a.test_background,
            ..PartitionSpec::full_test()
        },
    };
    let population = generate_population::<f64>(&config, &spec)?;
    create_dir(&a.out)?;

    let roster: String = (0..a.blacklist).map(|i| blacklist_speaker_id(i) + "\n").collect();
    fs::write(a.out.join("blacklist.txt"), roster)?;
    for p in Partition::ALL {
        let set = population.get(p);
        save_embeddings(set, a.out.join(format!("{p}.csv")))?;
        spec.get(p).manifest(p).save(a.out.join(format!("{p}.manifest")))?;
        if p != Partition::Train {
            save_key(&answer_key(set, &population.blacklist), a.out.join(format!("{p}_key.csv")))?;
        }
        println!("{p}: {} utterances", set.len());
    }
    Ok(())
}

pub fn validate(a: ValidateArgs) -> Result<()> {
    let set = load_set(&a.set, None)?;
    let manifest = PartitionManifest::load(&a.manifest)?;
    let roster = read_roster(&a.blacklist)?;
    let mut foreign = BTreeSet::new();
    for other in &a.disjoint_from {
        foreign.extend(background_speakers(&load_set(other, None)?, &roster));
    }
    let reference = ValidationReference {
        blacklist: &roster,
        foreign_background: (!a.disjoint_from.is_empty()).then_some(&foreign),
    };
    let report = validate_partition(&set, &manifest, reference);
    println!("{}", serde_json::to_string_pretty(&report)?);
    if !report.passed() {
        let listed: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        bail!("{} violation(s): {}", listed.len(), listed.join("; "));
    }
    Ok(())
}

pub fn enroll(a: EnrollArgs) -> Result<()> {
    let roster = a.blacklist.as_deref().map(read_roster).transpose()?;
    let mut train = load_set(&a.train, None)?;
    if let Some(i) = (0..train.len()).find(|&i| train.speaker_id(i).is_none()) {
        let err = multitarget::Error::Unlabeled {
            row: i + 1,
            id: train.utterance_id(i).to_owned(),
        };
        return Err(err).with_context(|| format!("enrolling {}", a.train.display()));
    }
    if let Some(roster) = &roster {
        train = train.filter(|e| e.speaker_id.is_some_and(|s| roster.contains(s)));
        if train.is_empty() {
            bail!("{}: no utterances of blacklist speakers", a.train.display());
        }
    }
    let augment = match &a.augment {
        Some(path) => {
            let dev = load_set(path, Some(train.dimension()))?;
            Some(dev.filter(|e| match (e.speaker_id, &roster) {
                (None, _) => false,
                (Some(s), Some(r)) => r.contains(s),
                (Some(_), None) => true,
            }))
        }
        None => None,
    };

    let mut bank = enroll_bank(&train, augment.as_ref()).with_context(|| format!("enrolling {}", a.train.display()))?;
    let stats = compute_mnorm_stats(&bank, &train)?;
    let cohort = stats.cohort_size;
    bank.set_mnorm(stats)?;
    save_bank(&bank, &a.out)?;
    println!(
        "enrolled S={} D={} cohort={} augment={}",
        bank.len(),
        bank.dimension(),
        cohort,
        augment.as_ref().map_or(0, |s| s.len())
    );
    Ok(())
}

fn load_bank_dir(path: &Path) -> Result<DetectorBankF64> {
    load_bank(path).with_context(|| format!("loading bank {}", path.display()))
}

pub fn score(a: ScoreArgs) -> Result<()> {
    let bank = load_bank_dir(&a.bank)?;
    let trials = load_set(&a.trials, Some(bank.dimension()))?;
    let scores = normalized_scores(&bank, &trials, a.norm)?;
    save_scores(&scores, &a.out)?;
    println!("scored {} trials x {} detectors", scores.n_trials(), scores.n_detectors());
    Ok(())
}

#[derive(Serialize)]
struct ModeReports<'a> {
    top_s: &'a DetectorReportF64,
    top_1: &'a DetectorReportF64,
}

#[derive(Serialize)]
struct EvalConfig {
    command: &'static str,
    bank: String,
    trials: String,
    key: String,
    norm: multitarget::NormMode,
    det_points: u64,
    detectors: usize,
    dimension: usize,
}

#[derive(Serialize)]
struct Timing {
    load_seconds: f64,
    score_seconds: f64,
    evaluate_seconds: f64,
}

#[derive(Serialize)]
struct EvalReport<'a> {
    schema_version: u32,
    mode_reports: ModeReports<'a>,
    config: EvalConfig,
    timing: Option<Timing>,
}

pub fn eval(a: EvalArgs) -> Result<()> {
    let start = Instant::now();
    let bank = load_bank_dir(&a.bank)?;
    let trials = load_set(&a.trials, Some(bank.dimension()))?;
    let key = load_key(&a.key)?;
    let loaded = start.elapsed();

    let scores = normalized_scores(&bank, &trials, a.norm)?;
    let scored = start.elapsed();
    let evaluation = evaluate_scores(&scores, &key)?;
    let evaluated = start.elapsed();

    create_dir(&a.out)?;
    let max_points = usize::try_from(a.det_points)?;
    save_det_csv(&det_points(&evaluation.top_s, max_points)?, a.out.join("det_top_s.csv"))?;
    save_det_csv(&det_points(&evaluation.top_1, max_points)?, a.out.join("det_top_1.csv"))?;
    let report = EvalReport {
        schema_version: SCHEMA_VERSION,
        mode_reports: ModeReports {
            top_s: &evaluation.top_s,
            top_1: &evaluation.top_1,
        },
        config: EvalConfig {
            command: "eval",
            bank: a.bank.display().to_string(),
            trials: a.trials.display().to_string(),
            key: a.key.display().to_string(),
            norm: a.norm,
            det_points: a.det_points,
            detectors: bank.len(),
            dimension: bank.dimension(),
        },
        timing: a.record_timing.then(|| Timing {
            load_seconds: loaded.as_secs_f64(),
            score_seconds: (scored - loaded).as_secs_f64(),
            evaluate_seconds: (evaluated - scored).as_secs_f64(),
        }),
    };
    write_json(&a.out.join("report.json"), &report)?;
    println!(
        "top_s_eer={} top_1_eer={} blacklist_trials={} background_trials={}",
        evaluation.top_s.eer, evaluation.top_1.eer, evaluation.top_s.counts.blacklist, evaluation.top_s.counts.background
    );
    Ok(())
}

pub fn sweep_config(a: &SimulateArgs) -> SweepConfig {
    SweepConfig {
        population: population_config(&a.population),
        sizes: a.sizes.clone(),
        replicates: a.replicates,
        enroll_utts_per_speaker: a.enroll_utts,
        test: PartitionSpec {
            blacklist_speakers: a.test_blacklist,
            background_speakers: a.test_background,
            ..PartitionSpec::full_test()
        },
        norm: a.norm,
    }
}

#[derive(Serialize)]
struct SweepSidecar<'a> {
    schema_version: u32,
    config: &'a SweepConfig,
    result: &'a SizeSweepResult<f64>,
}

pub fn sweep_csv(result: &SizeSweepResult<f64>) -> String {
    let mut csv = String::from("blacklist_size,top_s_eer,top_1_eer\n");
    for row in &result.rows {
        writeln!(csv, "{},{},{}", row.blacklist_size, row.top_s_eer, row.top_1_eer).expect("string write");
    }
    csv
}

pub fn simulate(a: SimulateArgs) -> Result<()> {
    let config = sweep_config(&a);
    config.validate()?;
    let result = run_size_sweep::<f64>(&config)?;
    create_dir(&a.out)?;
    let csv_path = a.out.join("size_sweep.csv");
    fs::write(&csv_path, sweep_csv(&result)).with_context(|| format!("writing {}", csv_path.display()))?;
    write_json(
        &a.out.join("size_sweep.json"),
        &SweepSidecar {
            schema_version: SCHEMA_VERSION,
            config: &config,
            result: &result,
        },
    )?;
    print!("{}", sweep_csv(&result));
    Ok(())
}
