//! Landmark frames, sequences and run configuration.
//!
//! Parsing from files lives in the `faceflow` crate; these types only
//! enforce their invariants.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::geometry::Point2;
use crate::{Error, Result};

/// Landmarks per face (the 68-point iBUG/Multi-PIE layout).
pub const LANDMARK_COUNT: usize = 68;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageSize {
    pub height: usize,
    pub width: usize,
}

impl ImageSize {
    pub const fn new(height: usize, width: usize) -> Self {
        Self { height, width }
    }
}

/// Tracked landmarks for one video frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkFrame {
    frame_index: u64,
    points: Vec<Point2>,
    source_image_path: Option<String>,
}

impl LandmarkFrame {
    pub fn new(
        frame_index: u64,
        points: Vec<Point2>,
        source_image_path: Option<String>,
    ) -> Result<Self> {
        if points.len() != LANDMARK_COUNT {
            return Err(Error::InvalidLandmarks(format!(
                "expected {LANDMARK_COUNT} points, got {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidLandmarks(format!(
                "frame {frame_index}: landmark {i} is not finite"
            )));
        }
        Ok(Self {
            frame_index,
            points,
            source_image_path,
        })
    }

    pub fn frame_index(&self) -> u64 {
        self.frame_index
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn source_image_path(&self) -> Option<&str> {
        self.source_image_path.as_deref()
    }

    /// Axis-aligned bounds `(min, max)` of the landmarks.
    pub fn bounds(&self) -> (Point2, Point2) {
        let mut lo = self.points[0];
        let mut hi = self.points[0];
        for p in &self.points[1..] {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }
}

/// Consecutive landmark frames of one video.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    id: String,
    frames: Vec<LandmarkFrame>,
    image_size: ImageSize,
}

impl Sequence {
    /// Requires at least two frames with strictly increasing indices. Frames
    /// that carry an image path must keep their landmarks inside the image.
    pub fn new(
        id: impl Into<String>,
        frames: Vec<LandmarkFrame>,
        image_size: ImageSize,
    ) -> Result<Self> {
        let id = id.into();
        if image_size.height == 0 || image_size.width == 0 {
            return Err(Error::InvalidLandmarks(format!("{id}: empty image size")));
        }
        if frames.len() < 2 {
            return Err(Error::InvalidLandmarks(format!(
                "{id}: a sequence needs at least 2 frames, got {}",
                frames.len()
            )));
        }
        for w in frames.windows(2) {
            if w[1].frame_index <= w[0].frame_index {
                return Err(Error::InvalidLandmarks(format!(
                    "{id}: frame indices not strictly increasing ({} then {})",
                    w[0].frame_index, w[1].frame_index
                )));
            }
        }
        let (w, h) = (
            (image_size.width - 1) as f64,
            (image_size.height - 1) as f64,
        );
        for f in frames.iter().filter(|f| f.source_image_path.is_some()) {
            if f.points
                .iter()
                .any(|p| p.x < 0.0 || p.y < 0.0 || p.x > w || p.y > h)
            {
                return Err(Error::InvalidLandmarks(format!(
                    "{id}: frame {} has landmarks outside its {}x{} image",
                    f.frame_index, image_size.height, image_size.width
                )));
            }
        }
        Ok(Self {
            id,
            frames,
            image_size,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn frames(&self) -> &[LandmarkFrame] {
        &self.frames
    }

    pub fn image_size(&self) -> ImageSize {
        self.image_size
    }

    /// Subject identifier: the part of the id before the first `_`.
    pub fn subject(&self) -> &str {
        subject_of(&self.id)
    }
}

/// Subject identifier of a sequence id (`F001_T1` -> `F001`).
pub fn subject_of(sequence_id: &str) -> &str {
    sequence_id.split('_').next().unwrap_or(sequence_id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResampleMethod {
    #[default]
    PiecewiseCubic,
    PiecewiseLinear,
}

impl ResampleMethod {
    pub fn name(self) -> &'static str {
        match self {
            ResampleMethod::PiecewiseCubic => "piecewise-cubic",
            ResampleMethod::PiecewiseLinear => "piecewise-linear",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "piecewise-cubic" => Some(ResampleMethod::PiecewiseCubic),
            "piecewise-linear" => Some(ResampleMethod::PiecewiseLinear),
            _ => None,
        }
    }
}

/// What flow pixels outside the landmark hull receive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BackgroundPolicy {
    #[default]
    ZeroFill,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Pixels added around the landmark box before cropping.
    pub crop_offset: u32,
    /// Huber knee `d`.
    pub huber_delta: f64,
    /// Weights of the endpoint, cyclic and third loss terms.
    pub loss_weights: [f64; 3],
    pub resample_method: ResampleMethod,
    pub background_policy: BackgroundPolicy,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            crop_offset: 20,
            huber_delta: 1.0,
            loss_weights: [0.3, 0.5, 0.2],
            resample_method: ResampleMethod::PiecewiseCubic,
            background_policy: BackgroundPolicy::ZeroFill,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.huber_delta > 0.0) || !self.huber_delta.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "huber_delta must be positive, got {}",
                self.huber_delta
            )));
        }
        if self
            .loss_weights
            .iter()
            .any(|w| !(*w >= 0.0) || !w.is_finite())
        {
            return Err(Error::InvalidConfig(
                "loss weights must be non-negative".into(),
            ));
        }
        if !(self.loss_weights.iter().sum::<f64>() > 0.0) {
            return Err(Error::InvalidConfig(
                "loss weights must not all be zero".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pts(dx: f64) -> Vec<Point2> {
        (0..LANDMARK_COUNT)
            .map(|i| Point2::new(10.0 + i as f64 + dx, 20.0 + (i % 7) as f64))
            .collect()
    }

    #[test]
    fn frame_requires_68_finite_points() {
        assert!(LandmarkFrame::new(0, pts(0.0), None).is_ok());
        assert!(LandmarkFrame::new(0, pts(0.0)[..67].to_vec(), None).is_err());
        let mut bad = pts(0.0);
        bad[5].y = f64::NAN;
        assert!(LandmarkFrame::new(0, bad, None).is_err());
    }

    #[test]
    fn sequence_invariants() {
        let f = |i| LandmarkFrame::new(i, pts(0.0), None).unwrap();
        let size = ImageSize::new(100, 100);
        assert!(Sequence::new("S1_a", vec![f(0), f(1)], size).is_ok());
        assert!(Sequence::new("S1_a", vec![f(0)], size).is_err());
        assert!(Sequence::new("S1_a", vec![f(1), f(1)], size).is_err());
        let with_img = LandmarkFrame::new(2, pts(50.0), Some("x.png".into())).unwrap();
        assert!(Sequence::new("S1_a", vec![f(0), with_img], size).is_err());
        assert_eq!(
            Sequence::new("S1_a", vec![f(0), f(1)], size)
                .unwrap()
                .subject(),
            "S1"
        );
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let mut c = RunConfig::default();
        c.huber_delta = 0.0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.loss_weights = [0.0; 3];
        assert!(c.validate().is_err());
    }
}
