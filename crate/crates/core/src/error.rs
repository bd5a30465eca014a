use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the algorithmic core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A triangle with (near) zero area was used where an invertible one is required.
    SingularTriangle,
    /// A point set that cannot be triangulated or interpolated.
    DegenerateInput(&'static str),
    /// Two grids that must agree in size do not.
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// The landmark crop box does not intersect the image.
    EmptyCrop,
    /// An operation that needs at least one element received none.
    EmptyInput,
    /// Landmark data violating the frame or sequence invariants.
    InvalidLandmarks(String),
    /// A run configuration or loss setting outside its domain.
    InvalidConfig(String),
    /// Class labels or per-sample lists that do not line up.
    InvalidLabels(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularTriangle => f.write_str("singular (degenerate) triangle"),
            Error::DegenerateInput(why) => write!(f, "degenerate input: {why}"),
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::EmptyCrop => f.write_str("crop box is empty"),
            Error::EmptyInput => f.write_str("empty input"),
            Error::InvalidLandmarks(why) => write!(f, "invalid landmarks: {why}"),
            Error::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
            Error::InvalidLabels(why) => write!(f, "invalid labels: {why}"),
        }
    }
}

impl core::error::Error for Error {}
