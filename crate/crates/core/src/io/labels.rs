use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::embeddings::UNLABELED;

/// One line of the answer key: trial id and its blacklist speaker, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyEntry {
    pub utterance_id: String,
    pub speaker_id: Option<String>,
}

/// Loads a headerless `utterance_id,truth` CSV; truth `-` marks background.
pub fn load_key(path: impl AsRef<Path>) -> Result<Vec<KeyEntry>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(BufReader::new(file));
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let row = n + 1;
        let record = record.map_err(|e| Error::Parse {
            path: path.to_owned(),
            row,
            message: e.to_string(),
        })?;
        if record.len() != 2 {
            return Err(Error::Parse {
                path: path.to_owned(),
                row,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        if !seen.insert(record[0].to_owned()) {
            return Err(Error::DuplicateUtterance {
                row,
                id: record[0].to_owned(),
            });
        }
        out.push(KeyEntry {
            utterance_id: record[0].to_owned(),
            speaker_id: match &record[1] {
                UNLABELED => None,
                s => Some(s.to_owned()),
            },
        });
    }
    Ok(out)
}

pub fn save_key(entries: &[KeyEntry], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    entries
        .iter()
        .try_for_each(|e| writeln!(out, "{},{}", e.utterance_id, e.speaker_id.as_deref().unwrap_or(UNLABELED)))
        .and_then(|()| out.flush())
        .map_err(|e| Error::io(path, e))
}
