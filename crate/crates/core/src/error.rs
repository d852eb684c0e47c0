use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by loading, enrollment, scoring and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("{path}: file contains no rows")]
    EmptyFile { path: PathBuf },

    #[error("row {row}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}: non-finite value in component {component}")]
    NonFinite { row: usize, component: usize },

    #[error("row {row}: duplicate utterance id `{id}`")]
    DuplicateUtterance { row: usize, id: String },

    #[error("row {row}: utterance `{id}` has no speaker label")]
    Unlabeled { row: usize, id: String },

    #[error("dimension mismatch: {context}: expected {expected}, found {found}")]
    Shape {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("zero vector cannot be length-normalized ({what})")]
    ZeroVector { what: String },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("duplicate speaker id `{0}` in detector bank")]
    DuplicateSpeaker(String),

    #[error("model `{speaker}` is not unit length (norm {norm})")]
    NotUnit { speaker: String, norm: f64 },

    #[error("degenerate M-Norm cohort: detector {index} (`{speaker}`) has sigma {sigma:e}")]
    DegenerateCohort {
        index: usize,
        speaker: String,
        sigma: f64,
    },

    #[error("non-finite score at trial {trial}, detector {detector}")]
    NonFiniteScore { trial: usize, detector: usize },

    #[error("no label for trial `{0}`")]
    MissingLabel(String),

    #[error("label for trial `{trial}` names `{speaker}`, which is not an enrolled detector")]
    UnknownDetector { trial: String, speaker: String },

    #[error("truth index {index} outside detector range 1..={detectors}")]
    TruthOutOfRange { index: usize, detectors: usize },

    #[error("evaluation needs at least one {0} trial")]
    NoTrials(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
