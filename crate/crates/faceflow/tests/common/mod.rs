#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use faceflow::landmarks::{write_landmark_csv, CsvSchema};
use faceflow::manifest::{write_manifest, DatasetManifest, ManifestEntry, Split};
use faceflow_core::ingest::ImageSize;
use faceflow_core::synthetic::{affine_sequence, face_landmarks, gentle_motion};
use faceflow_core::{AffineMap2D, Sequence};

pub fn faceflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_faceflow"))
        .args(args)
        .output()
        .unwrap()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Per-step maps of synthetic sequence `i`: the shared gentle motion with a
/// sequence-dependent phase.
pub fn motion(size: ImageSize, i: usize, steps: usize) -> Vec<AffineMap2D> {
    (0..steps).map(|k| gentle_motion(size, k + 3 * i)).collect()
}

pub fn sequence(id: &str, size: ImageSize, maps: &[AffineMap2D]) -> Sequence {
    affine_sequence(id, &face_landmarks(size), maps, size).unwrap()
}

/// Writes `n` synthetic sequences of `frames` frames as landmark tracks
/// plus a manifest in `dir`; returns the manifest path.
pub fn write_dataset(dir: &Path, n: usize, frames: usize, size: ImageSize) -> PathBuf {
    let mut manifest = DatasetManifest::default();
    for i in 0..n {
        let id = format!("S{i:02}_t1");
        let seq = sequence(&id, size, &motion(size, i, frames - 1));
        write_landmark_csv(
            &dir.join(format!("{id}.csv")),
            seq.frames(),
            CsvSchema::XThenY,
        )
        .unwrap();
        manifest.entries.push(ManifestEntry {
            sequence_id: id,
            split: Split::Train,
            frame_count: frames,
            image_size: size,
        });
    }
    let path = dir.join("manifest.tsv");
    write_manifest(&path, &manifest).unwrap();
    path
}

/// Sorted `(name, bytes)` of every file in `dir`.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}
