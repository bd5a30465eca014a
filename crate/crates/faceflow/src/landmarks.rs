//! Landmark track CSV files: one row per frame, 68 x and 68 y coordinates.

use std::fs::File;
use std::path::Path;

use faceflow_core::ingest::LANDMARK_COUNT;
use faceflow_core::{LandmarkFrame, Point2};

use crate::atomic::write_atomic;
use crate::{Error, Result};

const COORDS: usize = 2 * LANDMARK_COUNT;

/// Column layout of the coordinate block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvSchema {
    /// `x_0 .. x_67, y_0 .. y_67`, as exported by OpenFace.
    XThenY,
    /// `x_0, y_0, x_1, y_1, ...`.
    Interleaved,
}

impl CsvSchema {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "x-then-y" => Some(CsvSchema::XThenY),
            "interleaved" => Some(CsvSchema::Interleaved),
            _ => None,
        }
    }

    fn point(self, coords: &[f64], i: usize) -> Point2 {
        match self {
            CsvSchema::XThenY => Point2::new(coords[i], coords[LANDMARK_COUNT + i]),
            CsvSchema::Interleaved => Point2::new(coords[2 * i], coords[2 * i + 1]),
        }
    }
}

/// Reads one frame per data row. The coordinates are the last 136 fields of
/// a row; any leading fields (frame number, timestamp, ...) are ignored. A
/// first row whose coordinate fields are not all numeric is a header.
pub fn parse_landmark_csv(path: &Path, schema: CsvSchema) -> Result<Vec<LandmarkFrame>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut frames = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let line = row as u64 + 1;
        let malformed = |reason: String| Error::MalformedRow {
            path: path.to_owned(),
            line,
            reason,
        };
        let record = record.map_err(|e| malformed(e.to_string()))?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() < COORDS {
            return Err(malformed(format!(
                "expected at least {COORDS} columns, found {}",
                record.len()
            )));
        }
        let fields = record.iter().skip(record.len() - COORDS);
        let parsed: Option<Vec<f64>> = fields.map(|f| f.parse::<f64>().ok()).collect();
        let coords = match parsed {
            Some(c) => c,
            None if row == 0 => continue,
            None => return Err(malformed("non-numeric coordinate".into())),
        };
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(malformed(format!(
                "non-finite coordinate in column {}",
                record.len() - COORDS + i + 1
            )));
        }
        let points = (0..LANDMARK_COUNT)
            .map(|i| schema.point(&coords, i))
            .collect();
        let frame = LandmarkFrame::new(frames.len() as u64, points, None)
            .map_err(|e| malformed(e.to_string()))?;
        frames.push(frame);
    }
    if frames.is_empty() {
        return Err(Error::EmptyFile(path.to_owned()));
    }
    Ok(frames)
}

/// Writes frames with a header row, using the shortest representation that
/// parses back to the same `f64`.
pub fn write_landmark_csv(path: &Path, frames: &[LandmarkFrame], schema: CsvSchema) -> Result<()> {
    let mut out = String::new();
    let header: Vec<String> = match schema {
        CsvSchema::XThenY => (0..LANDMARK_COUNT)
            .map(|i| format!("x_{i}"))
            .chain((0..LANDMARK_COUNT).map(|i| format!("y_{i}")))
            .collect(),
        CsvSchema::Interleaved => (0..LANDMARK_COUNT)
            .flat_map(|i| [format!("x_{i}"), format!("y_{i}")])
            .collect(),
    };
    out.push_str(&header.join(","));
    out.push('\n');
    for f in frames {
        let p = f.points();
        let values: Vec<f64> = match schema {
            CsvSchema::XThenY => p.iter().map(|q| q.x).chain(p.iter().map(|q| q.y)).collect(),
            CsvSchema::Interleaved => p.iter().flat_map(|q| [q.x, q.y]).collect(),
        };
        let row: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    write_atomic(path, |w| w.write_all(out.as_bytes()))
}
