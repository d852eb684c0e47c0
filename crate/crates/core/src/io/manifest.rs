//! Partition manifests and validation of embedding sets against them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::embeddings::EmbeddingSet;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Dev,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Train, Partition::Dev, Partition::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Dev => "dev",
            Partition::Test => "test",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Partition::Train),
            "dev" => Ok(Partition::Dev),
            "test" => Ok(Partition::Test),
            other => Err(Error::Config(format!("unknown partition `{other}`"))),
        }
    }
}

/// Expected shape of one data partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionManifest {
    pub partition_name: Partition,
    pub blacklist_speaker_count: usize,
    pub background_speaker_count: usize,
    pub min_utterances_per_blacklist_speaker: usize,
    pub total_utterances: usize,
}

const MANIFEST_KEYS: [&str; 5] = [
    "partition_name",
    "blacklist_speaker_count",
    "background_speaker_count",
    "min_utterances_per_blacklist_speaker",
    "total_utterances",
];

impl PartitionManifest {
    /// Renders the manifest as `key=value` lines in a fixed key order.
    pub fn to_text(&self) -> String {
        format!(
            "partition_name={}\nblacklist_speaker_count={}\nbackground_speaker_count={}\n\
             min_utterances_per_blacklist_speaker={}\ntotal_utterances={}\n",
            self.partition_name,
            self.blacklist_speaker_count,
            self.background_speaker_count,
            self.min_utterances_per_blacklist_speaker,
            self.total_utterances
        )
    }

    /// Parses `key=value` lines. Blank lines and `#` comments are ignored;
    /// every key must appear exactly once.
    pub fn parse(text: &str) -> Result<Self> {
        let mut fields = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("manifest line {}: expected key=value", n + 1)))?;
            let key = key.trim();
            if !MANIFEST_KEYS.contains(&key) {
                return Err(Error::Config(format!("manifest line {}: unknown key `{key}`", n + 1)));
            }
            if fields.insert(key, value.trim()).is_some() {
                return Err(Error::Config(format!("manifest line {}: repeated key `{key}`", n + 1)));
            }
        }
        let get = |key: &str| {
            fields
                .get(key)
                .copied()
                .ok_or_else(|| Error::Config(format!("manifest is missing `{key}`")))
        };
        let count = |key: &str| -> Result<usize> {
            let v = get(key)?;
            v.parse()
                .map_err(|_| Error::Config(format!("manifest `{key}`: `{v}` is not a non-negative integer")))
        };
        let manifest = Self {
            partition_name: get("partition_name")?.parse()?,
            blacklist_speaker_count: count("blacklist_speaker_count")?,
            background_speaker_count: count("background_speaker_count")?,
            min_utterances_per_blacklist_speaker: count("min_utterances_per_blacklist_speaker")?,
            total_utterances: count("total_utterances")?,
        };
        if manifest.min_utterances_per_blacklist_speaker == 0 || manifest.total_utterances == 0 {
            return Err(Error::Config(
                "manifest utterance counts must be positive".into(),
            ));
        }
        Ok(manifest)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// Speaker sets a partition is checked against.
#[derive(Debug, Clone, Copy)]
pub struct ValidationReference<'a> {
    /// Blacklist roster (the train blacklist speaker ids). Labeled speakers
    /// outside it are counted as background.
    pub blacklist: &'a BTreeSet<String>,
    /// Background speaker ids already used by other partitions. When present,
    /// any overlap is reported.
    pub foreign_background: Option<&'a BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    BlacklistSpeakerCount { expected: usize, found: usize },
    BackgroundSpeakerCount { expected: usize, found: usize },
    TooFewUtterances { speaker: String, minimum: usize, found: usize },
    TotalUtterances { expected: usize, found: usize },
    BackgroundOverlap { speaker: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BlacklistSpeakerCount { expected, found } => {
                write!(f, "blacklist speaker count: expected {expected}, found {found}")
            }
            Violation::BackgroundSpeakerCount { expected, found } => {
                write!(f, "background speaker count: expected {expected}, found {found}")
            }
            Violation::TooFewUtterances { speaker, minimum, found } => {
                write!(f, "blacklist speaker `{speaker}` has {found} utterances, minimum {minimum}")
            }
            Violation::TotalUtterances { expected, found } => {
                write!(f, "total utterances: expected {expected}, found {found}")
            }
            Violation::BackgroundOverlap { speaker } => {
                write!(f, "background speaker `{speaker}` also appears in another partition")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub partition: Partition,
    pub blacklist_speakers: usize,
    pub background_speakers: usize,
    pub total_utterances: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `set` against `manifest`. Violations are returned as data.
///
/// Each unlabeled row counts as one anonymous background speaker, which is
/// exact for partitions whose background speakers have a single utterance.
pub fn validate_partition<T: Scalar>(
    set: &EmbeddingSet<T>,
    manifest: &PartitionManifest,
    reference: ValidationReference<'_>,
) -> ValidationReport {
    let mut blacklist_utts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut background: BTreeSet<&str> = BTreeSet::new();
    let mut anonymous = 0usize;
    for i in 0..set.len() {
        match set.speaker_id(i) {
            Some(s) if reference.blacklist.contains(s) => *blacklist_utts.entry(s).or_default() += 1,
            Some(s) => {
                background.insert(s);
            }
            None => anonymous += 1,
        }
    }

    let mut violations = Vec::new();
    if blacklist_utts.len() != manifest.blacklist_speaker_count {
        violations.push(Violation::BlacklistSpeakerCount {
            expected: manifest.blacklist_speaker_count,
            found: blacklist_utts.len(),
        });
    }
    let background_speakers = background.len() + anonymous;
    if background_speakers != manifest.background_speaker_count {
        violations.push(Violation::BackgroundSpeakerCount {
            expected: manifest.background_speaker_count,
            found: background_speakers,
        });
    }
    for (speaker, &n) in &blacklist_utts {
        if n < manifest.min_utterances_per_blacklist_speaker {
            violations.push(Violation::TooFewUtterances {
                speaker: (*speaker).to_owned(),
                minimum: manifest.min_utterances_per_blacklist_speaker,
                found: n,
            });
        }
    }
    if set.len() != manifest.total_utterances {
        violations.push(Violation::TotalUtterances {
            expected: manifest.total_utterances,
            found: set.len(),
        });
    }
    if let Some(foreign) = reference.foreign_background {
        for speaker in background.iter().filter(|s| foreign.contains(**s)) {
            violations.push(Violation::BackgroundOverlap {
                speaker: (*speaker).to_owned(),
            });
        }
    }

    ValidationReport {
        partition: manifest.partition_name,
        blacklist_speakers: blacklist_utts.len(),
        background_speakers,
        total_utterances: set.len(),
        violations,
    }
}

/// Labeled background speaker ids of `set` (speakers outside `blacklist`).
pub fn background_speakers<T: Scalar>(set: &EmbeddingSet<T>, blacklist: &BTreeSet<String>) -> BTreeSet<String> {
    (0..set.len())
        .filter_map(|i| set.speaker_id(i))
        .filter(|s| !blacklist.contains(*s))
        .map(str::to_owned)
        .collect()
}
