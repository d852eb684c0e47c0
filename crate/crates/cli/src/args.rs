use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use multitarget::NormMode;

#[derive(Debug, Parser)]
#[command(name = "multitarget", version, about = "Multi-target (blacklist) speaker detection harness")]
pub struct Cli {
    /// Worker threads for scoring and replicates. Never changes any output.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic train/dev/test population with keys and manifests.
    Generate(GenerateArgs),
    /// Check an embedding file against a partition manifest.
    Validate(ValidateArgs),
    /// Enroll blacklist speakers and compute M-Norm statistics.
    Enroll(EnrollArgs),
    /// Score trials against an enrolled bank and write the score CSV.
    Score(ScoreArgs),
    /// Score, normalize and evaluate Top-S / Top-1 detectors.
    Eval(EvalArgs),
    /// Run the blacklist-size experiment on synthetic data.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PopulationArgs {
    #[arg(long, default_value_t = 600)]
    pub dimension: usize,
    #[arg(long, default_value_t = 1.0)]
    pub speaker_spread: f64,
    #[arg(long, default_value_t = 2.5)]
    pub channel_spread: f64,
    #[arg(long, default_value_t = 2018)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub population: PopulationArgs,
    /// Blacklist speakers (shared by all partitions).
    #[arg(long, default_value_t = 3631)]
    pub blacklist: usize,
    #[arg(long, default_value_t = 5000)]
    pub train_background: usize,
    /// Total train background utterances, spread over the train background speakers.
    #[arg(long, default_value_t = 30_952)]
    pub train_background_utts: usize,
    #[arg(long, default_value_t = 5000)]
    pub dev_background: usize,
    #[arg(long, default_value_t = 12_386)]
    pub test_background: usize,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Embedding CSV to check.
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long)]
    pub manifest: PathBuf,
    /// Blacklist roster, one speaker id per line.
    #[arg(long)]
    pub blacklist: PathBuf,
    /// Embedding CSVs of other partitions whose background speakers must not reappear.
    #[arg(long = "disjoint-from")]
    pub disjoint_from: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnrollArgs {
    /// Train embeddings. Without --blacklist every row must be labeled and is enrolled.
    #[arg(long)]
    pub train: PathBuf,
    /// Restrict enrollment to these speaker ids (one per line).
    #[arg(long)]
    pub blacklist: Option<PathBuf>,
    /// Dev embeddings whose labeled blacklist rows are pooled into enrollment.
    #[arg(long)]
    pub augment: Option<PathBuf>,
    /// Output directory for bank.csv and mnorm.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub bank: PathBuf,
    #[arg(long)]
    pub trials: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "full", value_parser = parse_norm)]
    pub norm: NormMode,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub bank: PathBuf,
    #[arg(long)]
    pub trials: PathBuf,
    /// Answer key CSV `utterance_id,truth` (`-` for background).
    #[arg(long)]
    pub key: PathBuf,
    /// Output directory for report.json and the DET CSVs.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "full", value_parser = parse_norm)]
    pub norm: NormMode,
    /// Maximum points per DET CSV.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..))]
    pub det_points: u64,
    /// Store wall-clock timings in the report (makes it run-dependent).
    #[arg(long)]
    pub record_timing: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub population: PopulationArgs,
    /// Comma-separated nondecreasing blacklist sizes.
    #[arg(long, value_delimiter = ',', default_values_t = multitarget::synth::DEFAULT_SIZES)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = multitarget::synth::DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[arg(long, default_value_t = 3)]
    pub enroll_utts: usize,
    #[arg(long, default_value_t = 3631)]
    pub test_blacklist: usize,
    #[arg(long, default_value_t = 12_386)]
    pub test_background: usize,
    #[arg(long, default_value = "full", value_parser = parse_norm)]
    pub norm: NormMode,
}

fn parse_norm(s: &str) -> Result<NormMode, String> {
    s.parse().map_err(|e: multitarget::Error| e.to_string())
}
