//! Whole-dataset flow generation: one worker per sequence.

use std::path::{Path, PathBuf};

use faceflow_core::flowgen::{generate_sequence_flow, StepLog};
use faceflow_core::{RunConfig, Sequence};
use rayon::prelude::*;

use crate::atomic::write_atomic;
use crate::flo::write_flo;
use crate::landmarks::{parse_landmark_csv, CsvSchema};
use crate::manifest::{DatasetManifest, ManifestEntry};
use crate::Result;

pub const LOG_NAME: &str = "generation.log";

/// Loads `<tracks>/<sequence_id>.csv` and checks it against the manifest.
pub fn load_sequence(tracks: &Path, entry: &ManifestEntry, schema: CsvSchema) -> Result<Sequence> {
    let path = tracks.join(format!("{}.csv", entry.sequence_id));
    let frames = parse_landmark_csv(&path, schema)?;
    if frames.len() != entry.frame_count {
        return Err(faceflow_core::Error::InvalidLandmarks(format!(
            "{}: manifest lists {} frames, track has {}",
            entry.sequence_id,
            entry.frame_count,
            frames.len()
        ))
        .into());
    }
    Ok(Sequence::new(
        entry.sequence_id.clone(),
        frames,
        entry.image_size,
    )?)
}

/// Output path of the flow from frame `k` to `k + 1`.
pub fn flow_path(out: &Path, sequence_id: &str, k: usize) -> PathBuf {
    out.join(format!("{sequence_id}_{k}.flo"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceReport {
    pub sequence_id: String,
    pub steps: Vec<StepLog>,
}

/// Generates and writes one sequence. The worker that computes a sequence
/// also writes its files.
pub fn generate_one(
    tracks: &Path,
    out: &Path,
    entry: &ManifestEntry,
    cfg: &RunConfig,
    schema: CsvSchema,
) -> Result<SequenceReport> {
    let seq = load_sequence(tracks, entry, schema)?;
    let flow = generate_sequence_flow(&seq, cfg)?;
    for (k, field) in flow.fields.iter().enumerate() {
        write_flo(&flow_path(out, &entry.sequence_id, k), field)?;
    }
    Ok(SequenceReport {
        sequence_id: entry.sequence_id.clone(),
        steps: flow.steps,
    })
}

/// Runs every manifest entry on the current rayon pool, then writes the
/// generation log in manifest order. Stops at the first failing sequence
/// (in manifest order).
pub fn generate_dataset(
    manifest: &DatasetManifest,
    tracks: &Path,
    out: &Path,
    cfg: &RunConfig,
    schema: CsvSchema,
) -> Result<Vec<SequenceReport>> {
    let reports: Vec<Result<SequenceReport>> = manifest
        .entries
        .par_iter()
        .map(|e| generate_one(tracks, out, e, cfg, schema))
        .collect();
    let reports = reports.into_iter().collect::<Result<Vec<_>>>()?;
    write_log(&out.join(LOG_NAME), &reports)?;
    Ok(reports)
}

/// Tab-separated `seq, k, anchors, dropped_triangles`, one line per pair.
pub fn write_log(path: &Path, reports: &[SequenceReport]) -> Result<()> {
    write_atomic(path, |w| {
        writeln!(w, "seq\tk\tanchors\tdropped_triangles")?;
        for r in reports {
            for s in &r.steps {
                writeln!(
                    w,
                    "{}\t{}\t{}\t{}",
                    r.sequence_id, s.k, s.anchors, s.dropped_triangles
                )?;
            }
        }
        Ok(())
    })
}
