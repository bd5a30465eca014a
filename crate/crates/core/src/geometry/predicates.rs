// Adaptive exact orientation and in-circle predicates.

use super::Point2;
use robust::Coord;

#[inline]
fn coord(p: Point2) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Positive when `c` lies to the left of the directed line `a -> b`
/// (counter-clockwise turn), zero when collinear. Exact sign.
#[inline]
pub(crate) fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    robust::orient2d(coord(a), coord(b), coord(c))
}

/// Positive when `d` lies strictly inside the circumcircle of the
/// counter-clockwise triangle `(a, b, c)`, zero when cocircular. Exact sign.
#[inline]
pub(crate) fn incircle(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    robust::incircle(coord(a), coord(b), coord(c), coord(d))
}
