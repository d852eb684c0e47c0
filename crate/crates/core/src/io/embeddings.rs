use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Literal written in the speaker column for unlabeled utterances.
pub const UNLABELED: &str = "-";

/// One utterance: identity metadata plus its fixed-length vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding<T> {
    pub utterance_id: String,
    pub speaker_id: Option<String>,
    pub vector: Vec<T>,
}

impl<T> Embedding<T> {
    pub fn new(utterance_id: impl Into<String>, speaker_id: Option<&str>, vector: Vec<T>) -> Self {
        Self {
            utterance_id: utterance_id.into(),
            speaker_id: speaker_id.map(str::to_owned),
            vector,
        }
    }
}

/// Borrowed view of one row of an [`EmbeddingSet`].
#[derive(Debug, Clone, Copy)]
pub struct EmbeddingRef<'a, T> {
    pub utterance_id: &'a str,
    pub speaker_id: Option<&'a str>,
    pub vector: &'a [T],
}

/// Ordered collection of embeddings sharing one dimension.
///
/// Vectors are stored contiguously in row-major order; row order is insertion
/// (file) order and is never changed.
#[derive(Debug, Clone)]
pub struct EmbeddingSet<T> {
    dimension: usize,
    utterance_ids: Vec<String>,
    speaker_ids: Vec<Option<String>>,
    data: Vec<T>,
    seen: HashSet<String>,
}

impl<T: PartialEq> PartialEq for EmbeddingSet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.utterance_ids == other.utterance_ids
            && self.speaker_ids == other.speaker_ids
            && self.data == other.data
    }
}

impl<T: Scalar> EmbeddingSet<T> {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Config("embedding dimension must be at least 1".into()));
        }
        Ok(Self {
            dimension,
            utterance_ids: Vec::new(),
            speaker_ids: Vec::new(),
            data: Vec::new(),
            seen: HashSet::new(),
        })
    }

    /// Builds a set from owned embeddings, inferring the dimension from the first.
    pub fn from_embeddings(embeddings: impl IntoIterator<Item = Embedding<T>>) -> Result<Self> {
        let mut iter = embeddings.into_iter().peekable();
        let dimension = iter.peek().map(|e| e.vector.len()).ok_or(Error::Empty("embedding set"))?;
        let mut set = Self::new(dimension)?;
        for e in iter {
            set.push(e)?;
        }
        Ok(set)
    }

    /// Appends one embedding, enforcing dimension, finiteness and id uniqueness.
    /// Errors name the 1-based row the embedding would occupy.
    pub fn push(&mut self, embedding: Embedding<T>) -> Result<()> {
        self.push_parts(embedding.utterance_id, embedding.speaker_id, &embedding.vector)
    }

    pub(crate) fn push_parts(
        &mut self,
        utterance_id: String,
        speaker_id: Option<String>,
        vector: &[T],
    ) -> Result<()> {
        let row = self.len() + 1;
        if vector.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                row,
                expected: self.dimension,
                found: vector.len(),
            });
        }
        if let Some(component) = vector.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row,
                component: component + 1,
            });
        }
        if !self.seen.insert(utterance_id.clone()) {
            return Err(Error::DuplicateUtterance { row, id: utterance_id });
        }
        self.utterance_ids.push(utterance_id);
        self.speaker_ids.push(speaker_id);
        self.data.extend_from_slice(vector);
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.utterance_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utterance_ids.is_empty()
    }

    pub fn utterance_id(&self, i: usize) -> &str {
        &self.utterance_ids[i]
    }

    pub fn utterance_ids(&self) -> &[String] {
        &self.utterance_ids
    }

    pub fn speaker_id(&self, i: usize) -> Option<&str> {
        self.speaker_ids[i].as_deref()
    }

    pub fn vector(&self, i: usize) -> &[T] {
        &self.data[i * self.dimension..(i + 1) * self.dimension]
    }

    /// Row-major `len × dimension` matrix of all vectors.
    pub fn matrix(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize) -> EmbeddingRef<'_, T> {
        EmbeddingRef {
            utterance_id: self.utterance_id(i),
            speaker_id: self.speaker_id(i),
            vector: self.vector(i),
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = EmbeddingRef<'_, T>> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// New set holding the rows for which `keep` returns true, in original order.
    pub fn filter(&self, mut keep: impl FnMut(EmbeddingRef<'_, T>) -> bool) -> Self {
        let mut out = Self::new(self.dimension).expect("dimension already validated");
        for e in self.iter() {
            if keep(e) {
                out.push_parts(e.utterance_id.to_owned(), e.speaker_id.map(str::to_owned), e.vector)
                    .expect("rows of a valid set stay valid");
            }
        }
        out
    }

    /// Speaker ids in order of first appearance (unlabeled rows skipped).
    pub fn speakers(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.speaker_ids
            .iter()
            .flatten()
            .filter(|s| seen.insert(s.as_str()))
            .map(String::as_str)
            .collect()
    }
}

/// Loads a headerless embedding CSV (`utterance_id,speaker_id,v1,...,vD`).
///
/// The dimension is taken from the first row unless `expected_dimension` is
/// given, in which case every row must match it.
pub fn load_embeddings<T: Scalar>(
    path: impl AsRef<Path>,
    expected_dimension: Option<usize>,
) -> Result<EmbeddingSet<T>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(BufReader::with_capacity(1 << 20, file));

    let mut set: Option<EmbeddingSet<T>> = None;
    let mut record = csv::StringRecord::new();
    let mut values: Vec<T> = Vec::new();
    let mut row = 0usize;
    loop {
        let more = reader.read_record(&mut record).map_err(|e| Error::Parse {
            path: path.to_owned(),
            row: row + 1,
            message: e.to_string(),
        })?;
        if !more {
            break;
        }
        row += 1;
        let parse_err = |message: String| Error::Parse {
            path: path.to_owned(),
            row,
            message,
        };
        if record.len() < 3 {
            return Err(parse_err(format!(
                "expected utterance_id, speaker_id and at least one value, found {} fields",
                record.len()
            )));
        }
        let utterance_id = record[0].to_owned();
        let speaker_id = match &record[1] {
            UNLABELED => None,
            s => Some(s.to_owned()),
        };
        values.clear();
        for (k, field) in record.iter().skip(2).enumerate() {
            let v: T = field
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("component {}: cannot parse `{field}` as a number", k + 1)))?;
            values.push(v);
        }
        let set = match &mut set {
            Some(s) => s,
            None => {
                let dim = expected_dimension.unwrap_or(values.len());
                set.insert(EmbeddingSet::new(dim)?)
            }
        };
        set.push_parts(utterance_id, speaker_id, &values)?;
    }
    set.ok_or_else(|| Error::EmptyFile { path: path.to_owned() })
}

/// Writes `set` in the same headerless CSV format `load_embeddings` reads.
pub fn save_embeddings<T: Scalar>(set: &EmbeddingSet<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::with_capacity(1 << 20, file);
    write_embeddings(set, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn write_embeddings<T: Scalar>(set: &EmbeddingSet<T>, out: &mut impl Write) -> std::io::Result<()> {
    for e in set.iter() {
        write!(out, "{},{}", e.utterance_id, e.speaker_id.unwrap_or(UNLABELED))?;
        for v in e.vector {
            write!(out, ",{v}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}
