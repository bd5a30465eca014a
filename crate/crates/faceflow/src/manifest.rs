//! Dataset manifests: which sequences exist, their sizes, and the
//! subject-disjoint train/val/test split.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use faceflow_core::ingest::{subject_of, ImageSize};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::atomic::write_atomic;
use crate::imageio::image_dimensions;
use crate::landmarks::{parse_landmark_csv, CsvSchema};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Split::ALL.into_iter().find(|v| v.name() == s)
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub sequence_id: String,
    pub split: Split,
    pub frame_count: usize,
    pub image_size: ImageSize,
}

impl ManifestEntry {
    pub fn subject(&self) -> &str {
        subject_of(&self.sequence_id)
    }
}

/// Entries in file order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn split_of(&self, sequence_id: &str) -> Option<Split> {
        self.entries
            .iter()
            .find(|e| e.sequence_id == sequence_id)
            .map(|e| e.split)
    }

    /// Subjects per split, sorted.
    pub fn subjects(&self, split: Split) -> BTreeSet<&str> {
        self.entries
            .iter()
            .filter(|e| e.split == split)
            .map(|e| e.subject())
            .collect()
    }
}

/// Parses `sequence_id<TAB>split<TAB>frame_count<TAB>H<TAB>W` lines. Blank
/// lines and lines starting with `#` are skipped.
pub fn read_manifest(path: &Path) -> Result<DatasetManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut entries = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let bad = |reason: String| Error::MalformedManifest {
            path: path.to_owned(),
            line: i + 1,
            reason,
        };
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 5 {
            return Err(bad(format!(
                "expected 5 tab-separated fields, found {}",
                f.len()
            )));
        }
        let num = |s: &str, what: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| bad(format!("bad {what} {s:?}")))
        };
        let entry = ManifestEntry {
            sequence_id: f[0].to_owned(),
            split: Split::from_name(f[1])
                .ok_or_else(|| bad(format!("unknown split {:?}", f[1])))?,
            frame_count: num(f[2], "frame count")?,
            image_size: ImageSize::new(num(f[3], "height")?, num(f[4], "width")?),
        };
        if entry.sequence_id.is_empty() {
            return Err(bad("empty sequence id".into()));
        }
        if !seen.insert(entry.sequence_id.clone()) {
            return Err(bad(format!(
                "duplicate sequence id {:?}",
                entry.sequence_id
            )));
        }
        entries.push(entry);
    }
    Ok(DatasetManifest { entries })
}

pub fn write_manifest(path: &Path, manifest: &DatasetManifest) -> Result<()> {
    write_atomic(path, |w| {
        for e in &manifest.entries {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}",
                e.sequence_id, e.split, e.frame_count, e.image_size.height, e.image_size.width
            )?;
        }
        Ok(())
    })
}

/// Number of subjects per split: floors of `n * fraction`, with the
/// leftover subjects handed out by largest remainder (ties to the earlier
/// split).
pub fn split_counts(n: usize, fractions: [f64; 3]) -> [usize; 3] {
    let exact = fractions.map(|f| n as f64 * f);
    let mut counts = exact.map(|e| e.floor() as usize);
    let mut order = [0, 1, 2];
    order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())));
    let mut left = n - counts.iter().sum::<usize>();
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    counts
}

/// Scans `root` for `<sequence_id>.csv` landmark tracks. Each sequence's
/// image size comes from the first image (by name) in `root/<sequence_id>/`.
/// Subjects are shuffled with `seed` and split by [`split_counts`].
pub fn build_manifest(
    root: &Path,
    fractions: [f64; 3],
    schema: CsvSchema,
    seed: u64,
) -> Result<DatasetManifest> {
    if fractions.iter().any(|f| !(*f >= 0.0)) || (fractions.iter().sum::<f64>() - 1.0).abs() > 1e-9
    {
        return Err(Error::BadFractions(fractions));
    }
    let mut tracks = Vec::new();
    for entry in std::fs::read_dir(root).map_err(|e| Error::io(root, e))? {
        let path = entry.map_err(|e| Error::io(root, e))?.path();
        if path.extension().is_some_and(|x| x == "csv") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                tracks.push((stem.to_owned(), path));
            }
        }
    }
    if tracks.is_empty() {
        return Err(Error::EmptyDataset(root.to_owned()));
    }
    tracks.sort();

    let mut by_subject: BTreeMap<String, Vec<ManifestEntry>> = BTreeMap::new();
    for (id, path) in tracks {
        let frames = parse_landmark_csv(&path, schema)?;
        let image_size = first_image_size(&root.join(&id))?;
        by_subject
            .entry(subject_of(&id).to_owned())
            .or_default()
            .push(ManifestEntry {
                sequence_id: id,
                split: Split::Train,
                frame_count: frames.len(),
                image_size,
            });
    }

    let mut subjects: Vec<String> = by_subject.keys().cloned().collect();
    subjects.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let [n_train, n_val, _] = split_counts(subjects.len(), fractions);
    let mut entries = Vec::new();
    for (i, s) in subjects.iter().enumerate() {
        let split = if i < n_train {
            Split::Train
        } else if i < n_train + n_val {
            Split::Val
        } else {
            Split::Test
        };
        entries.extend(
            by_subject[s]
                .iter()
                .cloned()
                .map(|e| ManifestEntry { split, ..e }),
        );
    }
    entries.sort_by(|a, b| a.sequence_id.cmp(&b.sequence_id));
    Ok(DatasetManifest { entries })
}

fn first_image_size(dir: &Path) -> Result<ImageSize> {
    let mut images: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|x| x.to_str())
                .is_some_and(|x| matches!(x.to_ascii_lowercase().as_str(), "png" | "ppm"))
        })
        .collect();
    images.sort();
    let first = images.first().ok_or_else(|| {
        Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no frame images"),
        )
    })?;
    image_dimensions(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn largest_remainder_counts() {
        assert_eq!(split_counts(41, [0.7, 0.2, 0.1]), [29, 8, 4]);
        assert_eq!(split_counts(10, [0.8, 0.1, 0.1]), [8, 1, 1]);
        assert_eq!(split_counts(1, [0.8, 0.1, 0.1]), [1, 0, 0]);
        assert_eq!(split_counts(3, [1.0 / 3.0; 3]), [1, 1, 1]);
        assert_eq!(split_counts(0, [0.5, 0.5, 0.0]), [0, 0, 0]);
    }

    #[test]
    fn manifest_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let m = DatasetManifest {
            entries: vec![
                ManifestEntry {
                    sequence_id: "F001_T1".into(),
                    split: Split::Train,
                    frame_count: 10,
                    image_size: ImageSize::new(384, 512),
                },
                ManifestEntry {
                    sequence_id: "M002_T4".into(),
                    split: Split::Test,
                    frame_count: 3,
                    image_size: ImageSize::new(96, 128),
                },
            ],
        };
        let p = dir.path().join("m.tsv");
        write_manifest(&p, &m).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap().lines().next(),
            Some("F001_T1\ttrain\t10\t384\t512")
        );
        assert_eq!(read_manifest(&p).unwrap(), m);
        assert_eq!(m.split_of("M002_T4"), Some(Split::Test));

        for bad in [
            "a\ttrain\t3\t4",
            "a\tdev\t3\t4\t5",
            "a\ttrain\tx\t4\t5",
            "a\ttrain\t3\t4\t5\na\ttest\t3\t4\t5",
        ] {
            std::fs::write(&p, bad).unwrap();
            assert!(
                matches!(read_manifest(&p), Err(Error::MalformedManifest { .. })),
                "{bad}"
            );
        }
    }
}
