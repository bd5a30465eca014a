use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    /// Failure while writing an output file.
    #[error("writing {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}:{line}: malformed row: {reason}", path.display())]
    MalformedRow {
        path: PathBuf,
        line: u64,
        reason: String,
    },
    #[error("{}: no data rows", .0.display())]
    EmptyFile(PathBuf),
    #[error("{}: not a flow file (bad tag {tag})", path.display())]
    BadMagic { path: PathBuf, tag: f32 },
    #[error("{}: truncated file ({found} of {expected} bytes)", path.display())]
    TruncatedFile {
        path: PathBuf,
        expected: u64,
        found: u64,
    },
    #[error("{}: bad flow dimensions {width}x{height}", path.display())]
    DimensionMismatch {
        path: PathBuf,
        width: i64,
        height: i64,
    },
    #[error("{}:{line}: malformed manifest line: {reason}", path.display())]
    MalformedManifest {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("{}:{line}: {reason}", path.display())]
    MalformedConfig {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("no sequences found under {}", .0.display())]
    EmptyDataset(PathBuf),
    #[error("split fractions must be non-negative and sum to 1, got {0:?}")]
    BadFractions([f64; 3]),
    #[error("{}: {source}", path.display())]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error(transparent)]
    Core(#[from] faceflow_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn write(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Write {
            path: path.into(),
            source,
        }
    }
}
