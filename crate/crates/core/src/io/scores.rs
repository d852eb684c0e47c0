use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::bank::scores::ScoreMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Writes the score CSV: header `utterance_id,<detector ids...>`, then one
/// row per trial. Values use the shortest decimal form that parses back to
/// the identical float.
pub fn save_scores<T: Scalar>(matrix: &ScoreMatrix<T>, path: impl AsRef<Path>) -> Result<()> {
    matrix.check_finite()?;
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::with_capacity(1 << 20, file);
    write_scores(matrix, &mut out)
        .and_then(|()| out.flush())
        .map_err(|e| Error::io(path, e))
}

fn write_scores<T: Scalar>(matrix: &ScoreMatrix<T>, out: &mut impl Write) -> std::io::Result<()> {
    out.write_all(b"utterance_id")?;
    for id in matrix.detector_ids() {
        write!(out, ",{id}")?;
    }
    out.write_all(b"\n")?;
    for (t, row) in matrix.rows().enumerate() {
        out.write_all(matrix.trial_ids()[t].as_bytes())?;
        for y in row {
            write!(out, ",{y}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn load_scores<T: Scalar>(path: impl AsRef<Path>) -> Result<ScoreMatrix<T>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(BufReader::with_capacity(1 << 20, file));
    let csv_err = |row: usize, e: csv::Error| Error::Parse {
        path: path.to_owned(),
        row,
        message: e.to_string(),
    };
    let header = reader.headers().map_err(|e| csv_err(1, e))?.clone();
    if header.is_empty() || &header[0] != "utterance_id" {
        return Err(Error::Parse {
            path: path.to_owned(),
            row: 1,
            message: "header must start with `utterance_id`".into(),
        });
    }
    let detector_ids: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let mut trial_ids = Vec::new();
    let mut scores = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let row = n + 2;
        let record = record.map_err(|e| csv_err(row, e))?;
        trial_ids.push(record[0].to_owned());
        for field in record.iter().skip(1) {
            let y: T = field.trim().parse().map_err(|_| Error::Parse {
                path: path.to_owned(),
                row,
                message: format!("cannot parse `{field}` as a score"),
            })?;
            scores.push(y);
        }
    }
    ScoreMatrix::new(trial_ids, detector_ids, scores)
}
