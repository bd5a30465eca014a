//! Deterministic synthetic faces: a 68-point landmark layout, sequences
//! moved by known affine maps, and frames rendered from a smooth texture.
//! Used by the tests and by the `faceflow` demo data.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::geometry::{AffineMap2D, Point2};
use crate::image::Image;
use crate::ingest::{ImageSize, LandmarkFrame, Sequence, LANDMARK_COUNT};
use crate::Result;

/// Face-like landmarks in the usual 68-point order (jaw, brows, nose,
/// eyes, outer and inner lips), centred in an image of `size`.
pub fn face_landmarks(size: ImageSize) -> Vec<Point2> {
    let c = face_center(size);
    let s = 0.3 * size.height.min(size.width) as f64;
    let mut p = Vec::with_capacity(LANDMARK_COUNT);
    let at = |dx: f64, dy: f64| Point2::new(c.x + dx * s, c.y + dy * s);
    for i in 0..17 {
        let a = PI * i as f64 / 16.0;
        p.push(at(-libm::cos(a), 1.1 * libm::sin(a) - 0.1));
    }
    for side in [-1.0, 1.0] {
        for i in 0..5 {
            let t = i as f64 / 4.0;
            let dx = if side < 0.0 {
                -0.75 + 0.6 * t
            } else {
                0.15 + 0.6 * t
            };
            p.push(at(dx, -0.5 - 0.08 * libm::sin(PI * t)));
        }
    }
    for i in 0..4 {
        p.push(at(0.0, -0.3 + 0.12 * i as f64));
    }
    for i in 0..5 {
        let t = i as f64 / 4.0 - 0.5;
        p.push(at(0.4 * t, 0.2 + 0.05 * (1.0 - 4.0 * t * t)));
    }
    for cx in [-0.4, 0.4] {
        for i in 0..6 {
            let a = PI + 2.0 * PI * i as f64 / 6.0;
            p.push(at(cx + 0.15 * libm::cos(a), -0.25 + 0.06 * libm::sin(a)));
        }
    }
    for i in 0..12 {
        let a = PI + 2.0 * PI * i as f64 / 12.0;
        p.push(at(0.35 * libm::cos(a), 0.5 + 0.12 * libm::sin(a)));
    }
    for i in 0..8 {
        let a = PI + 2.0 * PI * i as f64 / 8.0;
        p.push(at(0.22 * libm::cos(a), 0.5 + 0.05 * libm::sin(a)));
    }
    p
}

/// Centre the landmark layout is built around.
pub fn face_center(size: ImageSize) -> Point2 {
    Point2::new(
        0.5 * (size.width - 1) as f64,
        0.5 * (size.height - 1) as f64,
    )
}

/// A small, smooth head motion for step `k`: rotation under a degree,
/// sub-percent scaling and a shift of about a pixel, about the face centre.
pub fn gentle_motion(size: ImageSize, k: usize) -> AffineMap2D {
    let k = k as f64;
    AffineMap2D::similarity(
        face_center(size),
        0.008 * libm::cos(0.9 * k + 0.3),
        1.0 + 0.004 * libm::sin(0.7 * k + 1.0),
        Point2::new(1.2 * libm::cos(0.5 * k), 0.8 * libm::sin(0.9 * k + 0.5)),
    )
}

/// `maps.len() + 1` frames: frame 0 is `base`, frame `k` is `maps[k - 1]`
/// applied to frame `k - 1`.
pub fn affine_sequence(
    id: impl Into<String>,
    base: &[Point2],
    maps: &[AffineMap2D],
    size: ImageSize,
) -> Result<Sequence> {
    let mut frames = Vec::with_capacity(maps.len() + 1);
    let mut cur = base.to_vec();
    frames.push(LandmarkFrame::new(0, cur.clone(), None)?);
    for (k, m) in maps.iter().enumerate() {
        cur = cur.iter().map(|&q| m.apply(q)).collect();
        frames.push(LandmarkFrame::new(k as u64 + 1, cur.clone(), None)?);
    }
    Sequence::new(id, frames, size)
}

/// Cumulative maps `M_0 = I, M_k = maps[k-1] ∘ M_{k-1}`.
pub fn cumulative(maps: &[AffineMap2D]) -> Vec<AffineMap2D> {
    let mut out = Vec::with_capacity(maps.len() + 1);
    out.push(AffineMap2D::IDENTITY);
    for m in maps {
        let last = *out.last().unwrap_or(&AffineMap2D::IDENTITY);
        out.push(last.then(m));
    }
    out
}

/// Smooth three-channel texture in `[0, 1]` with features tens of pixels
/// wide.
pub fn texture(x: f64, y: f64, channel: usize) -> f64 {
    let ph = channel as f64 * 1.3;
    let tau = 2.0 * PI;
    0.5 + 0.2 * libm::sin(tau * x / 40.0 + ph) * libm::cos(tau * y / 37.0 - ph)
        + 0.15 * libm::sin(tau * (x + y) / 53.0 + 2.0 * ph)
}

/// Frame rendered through `to_frame0`, the map from this frame's pixel
/// coordinates back to frame-0 texture coordinates.
pub fn render(size: ImageSize, to_frame0: &AffineMap2D) -> Image {
    Image::from_fn(size.height, size.width, 3, |x, y, c| {
        let q = to_frame0.apply(Point2::new(x as f64, y as f64));
        texture(q.x, q.y, c)
    })
}
