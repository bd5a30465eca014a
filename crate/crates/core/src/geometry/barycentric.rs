use super::{is_degenerate, Point2, Triangle};
use crate::{Error, Result};

/// Barycentric coordinates of a point with respect to `(v0, v1, v2)`.
///
/// The point is `l3 * v0 + l1 * v1 + l2 * v2`, with `l3 = 1 - l1 - l2`.
/// `l1` and `l2` are the weights of the edge vectors `v1 - v0` and
/// `v2 - v0`; `l3` is what is left for `v0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barycentric {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl Barycentric {
    pub fn from_edge_weights(l1: f64, l2: f64) -> Self {
        Self {
            l1,
            l2,
            l3: 1.0 - l1 - l2,
        }
    }

    /// Weights in vertex order `(v0, v1, v2)`.
    #[inline]
    pub fn vertex_weights(&self) -> [f64; 3] {
        [self.l3, self.l1, self.l2]
    }

    /// All three coordinates in `[0, 1]`: the point is in the closed triangle.
    #[inline]
    pub fn is_inside(&self) -> bool {
        self.is_inside_with(0.0)
    }

    #[inline]
    pub(crate) fn is_inside_with(&self, tol: f64) -> bool {
        let lo = -tol;
        let hi = 1.0 + tol;
        (lo..=hi).contains(&self.l1) && (lo..=hi).contains(&self.l2) && (lo..=hi).contains(&self.l3)
    }

    /// The point these coordinates describe in `tri`.
    #[inline]
    pub fn point_in(&self, tri: &Triangle) -> Point2 {
        tri[0] + (tri[1] - tri[0]) * self.l1 + (tri[2] - tri[0]) * self.l2
    }
}

/// Solves `v - v0 = l1 (v1 - v0) + l2 (v2 - v0)` through the 2x2 Gram system
/// obtained by dotting both sides with the two edge vectors.
pub fn barycentric_solve(v: Point2, tri: &Triangle) -> Result<Barycentric> {
    if is_degenerate(tri) {
        return Err(Error::SingularTriangle);
    }
    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let r = v - tri[0];

    let g11 = e1.dot(e1);
    let g12 = e1.dot(e2);
    let g22 = e2.dot(e2);
    let b1 = r.dot(e1);
    let b2 = r.dot(e2);

    let det = g11 * g22 - g12 * g12;
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::SingularTriangle);
    }
    let l1 = (g22 * b1 - g12 * b2) / det;
    let l2 = (g11 * b2 - g12 * b1) / det;
    Ok(Barycentric::from_edge_weights(l1, l2))
}

/// Closed-triangle membership test: the boundary counts as inside.
pub fn point_in_triangle(v: Point2, tri: &Triangle) -> Result<bool> {
    Ok(barycentric_solve(v, tri)?.is_inside())
}
