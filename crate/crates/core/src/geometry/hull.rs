use alloc::vec::Vec;

use super::predicates::orient;
use super::Point2;

/// Convex hull as a counter-clockwise polygon without collinear vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexHull {
    pub vertices: Vec<Point2>,
}

impl ConvexHull {
    /// `true` if `p` lies strictly outside the hull. Points on the boundary
    /// are not outside. A hull with fewer than three vertices has no
    /// interior, so only its own vertices and segment are "not outside".
    pub fn strictly_outside(&self, p: Point2) -> bool {
        let h = &self.vertices;
        match h.len() {
            0 => true,
            1 => p != h[0],
            2 => {
                orient(h[0], h[1], p) != 0.0
                    || (p - h[0]).dot(h[1] - h[0]) < 0.0
                    || (p - h[1]).dot(h[0] - h[1]) < 0.0
            }
            n => (0..n).any(|i| orient(h[i], h[(i + 1) % n], p) < 0.0),
        }
    }
}

/// Andrew's monotone chain with exact orientation tests.
pub fn convex_hull(points: &[Point2]) -> ConvexHull {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return ConvexHull { vertices: pts };
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    ConvexHull { vertices: hull }
}
