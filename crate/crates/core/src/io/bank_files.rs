//! On-disk detector bank: `bank.csv` (one embedding row per model, utterance
//! id = speaker id) and an optional `mnorm.json` with the cohort statistics.

use std::fs;
use std::path::Path;

use crate::bank::{DetectorBank, MNormStats};
use crate::error::{Error, Result};
use crate::io::embeddings::{load_embeddings, save_embeddings};
use crate::scalar::Scalar;

pub const BANK_FILE: &str = "bank.csv";
pub const MNORM_FILE: &str = "mnorm.json";

pub fn save_bank<T: Scalar>(bank: &DetectorBank<T>, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    save_embeddings(&bank.to_embedding_set(), dir.join(BANK_FILE))?;
    let stats_path = dir.join(MNORM_FILE);
    match bank.mnorm() {
        Some(stats) => {
            let mut json = serde_json::to_string_pretty(stats).map_err(|e| Error::Config(e.to_string()))?;
            json.push('\n');
            fs::write(&stats_path, json).map_err(|e| Error::io(&stats_path, e))
        }
        None if stats_path.exists() => fs::remove_file(&stats_path).map_err(|e| Error::io(&stats_path, e)),
        None => Ok(()),
    }
}

/// Loads a bank directory. Statistics are attached when `mnorm.json` exists
/// and must name the same detectors in the same order.
pub fn load_bank<T: Scalar>(dir: impl AsRef<Path>) -> Result<DetectorBank<T>> {
    let dir = dir.as_ref();
    let mut bank = DetectorBank::from_embedding_set(&load_embeddings(dir.join(BANK_FILE), None)?)?;
    let stats_path = dir.join(MNORM_FILE);
    if stats_path.exists() {
        let text = fs::read_to_string(&stats_path).map_err(|e| Error::io(&stats_path, e))?;
        let stats: MNormStats<T> = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: stats_path.clone(),
            row: e.line(),
            message: e.to_string(),
        })?;
        stats.check()?;
        if stats.detector_ids != bank.speaker_ids() {
            return Err(Error::Config(format!(
                "{}: detector ids do not match {BANK_FILE}",
                stats_path.display()
            )));
        }
        bank.set_mnorm(stats)?;
    }
    Ok(bank)
}
