//! Planar geometry for the landmark mesh: Delaunay triangulation,
//! barycentric coordinates, triangle rasterization and affine maps.

mod affine;
mod barycentric;
mod delaunay;
mod hull;
mod mesh;
pub(crate) mod predicates;
mod raster;

use core::ops::{Add, Mul, Sub};

pub use affine::{apply_affine, infer_affine, AffineMap2D};
pub use barycentric::{barycentric_solve, point_in_triangle, Barycentric};
pub use delaunay::delaunay;
pub use hull::{convex_hull, ConvexHull};
pub use mesh::TriangleMesh;
pub use raster::{rasterize_interior, PixelPos, PixelRect};

pub(crate) use raster::rasterize_with_tolerance;

/// Triangles whose absolute area is at or below this (px²) are degenerate.
pub const DEGENERATE_AREA: f64 = 1e-9;

/// A point in image coordinates: `x` grows to the right, `y` downwards.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    #[inline]
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        crate::math::hypot(self.x, self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// Three vertices `(v0, v1, v2)`.
pub type Triangle = [Point2; 3];

/// Signed area, positive for counter-clockwise vertex order in a y-up frame.
#[inline]
pub fn signed_area(tri: &Triangle) -> f64 {
    0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0])
}

#[inline]
pub fn is_degenerate(tri: &Triangle) -> bool {
    !(crate::math::abs(signed_area(tri)) > DEGENERATE_AREA)
}
