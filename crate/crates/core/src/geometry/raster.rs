use alloc::vec::Vec;

use super::{barycentric_solve, is_degenerate, Barycentric, Point2, Triangle};
use crate::math::{ceil, floor};
use crate::{Error, Result};

/// Integer pixel position (column `x`, row `y`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PixelPos {
    pub x: i64,
    pub y: i64,
}

impl PixelPos {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn to_point(self) -> Point2 {
        Point2::new(self.x as f64, self.y as f64)
    }
}

/// Inclusive integer rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelRect {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl PixelRect {
    pub const fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    /// All pixels of a `height x width` image.
    pub const fn image(height: usize, width: usize) -> Self {
        Self::new(0, 0, width as i64 - 1, height as i64 - 1)
    }

    /// Smallest integer rectangle containing the triangle.
    pub fn around(tri: &Triangle) -> Self {
        let (mut lo, mut hi) = (tri[0], tri[0]);
        for p in &tri[1..] {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        Self::new(
            floor(lo.x) as i64,
            floor(lo.y) as i64,
            ceil(hi.x) as i64,
            ceil(hi.y) as i64,
        )
    }

    pub fn intersect(&self, other: &PixelRect) -> Option<PixelRect> {
        let r = PixelRect::new(
            self.x0.max(other.x0),
            self.y0.max(other.y0),
            self.x1.min(other.x1),
            self.y1.min(other.y1),
        );
        (r.x0 <= r.x1 && r.y0 <= r.y1).then_some(r)
    }

    pub fn contains_rect(&self, other: &PixelRect) -> bool {
        self.x0 <= other.x0 && self.y0 <= other.y0 && self.x1 >= other.x1 && self.y1 >= other.y1
    }
}

/// Every integer point of `grid_bounds` in the closed triangle, scanned in
/// row-major order, together with its barycentric coordinates.
///
/// `grid_bounds` is expected to cover the triangle's bounding box; points
/// outside of it are never reported.
pub fn rasterize_interior(
    tri: &Triangle,
    grid_bounds: PixelRect,
) -> Result<Vec<(PixelPos, Barycentric)>> {
    rasterize_with_tolerance(tri, grid_bounds, 0.0)
}

pub(crate) fn rasterize_with_tolerance(
    tri: &Triangle,
    grid_bounds: PixelRect,
    tol: f64,
) -> Result<Vec<(PixelPos, Barycentric)>> {
    if is_degenerate(tri) {
        return Err(Error::SingularTriangle);
    }
    let mut out = Vec::new();
    let Some(scan) = PixelRect::around(tri).intersect(&grid_bounds) else {
        return Ok(out);
    };
    for y in scan.y0..=scan.y1 {
        for x in scan.x0..=scan.x1 {
            let p = PixelPos::new(x, y);
            let b = barycentric_solve(p.to_point(), tri)?;
            if b.is_inside_with(tol) {
                out.push((p, b));
            }
        }
    }
    Ok(out)
}
