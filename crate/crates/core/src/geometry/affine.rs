use super::{is_degenerate, Point2, Triangle};
use crate::{Error, Result};

/// A planar affine map stored as a 3x3 matrix acting on homogeneous row
/// vectors: `[x' y' 1] = [x y 1] * M`. The last column is `(0, 0, 1)ᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap2D {
    m: [[f64; 3]; 3],
}

impl AffineMap2D {
    pub const IDENTITY: AffineMap2D = AffineMap2D {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// `x' = a x + b y + tx`, `y' = c x + d y + ty`.
    pub const fn from_parts(a: f64, b: f64, c: f64, d: f64, tx: f64, ty: f64) -> Self {
        AffineMap2D {
            m: [[a, c, 0.0], [b, d, 0.0], [tx, ty, 1.0]],
        }
    }

    pub const fn translation(tx: f64, ty: f64) -> Self {
        Self::from_parts(1.0, 0.0, 0.0, 1.0, tx, ty)
    }

    /// Rotation by `angle` radians and isotropic `scale` about `center`,
    /// followed by a translation.
    pub fn similarity(center: Point2, angle: f64, scale: f64, shift: Point2) -> Self {
        let (s, c) = (libm::sin(angle) * scale, libm::cos(angle) * scale);
        let tx = center.x - (c * center.x - s * center.y) + shift.x;
        let ty = center.y - (s * center.x + c * center.y) + shift.y;
        Self::from_parts(c, -s, s, c, tx, ty)
    }

    pub fn matrix(&self) -> &[[f64; 3]; 3] {
        &self.m
    }

    /// Linear part as `[[a, b], [c, d]]` in `x' = a x + b y + tx` form.
    pub fn linear(&self) -> [[f64; 2]; 2] {
        [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]]
    }

    pub fn translation_part(&self) -> Point2 {
        Point2::new(self.m[2][0], self.m[2][1])
    }

    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        let m = &self.m;
        let x = p.x * m[0][0] + p.y * m[1][0] + m[2][0];
        let y = p.x * m[0][1] + p.y * m[1][1] + m[2][1];
        let w = p.x * m[0][2] + p.y * m[1][2] + m[2][2];
        if w == 1.0 {
            Point2::new(x, y)
        } else {
            Point2::new(x / w, y / w)
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &AffineMap2D) -> AffineMap2D {
        let mut out = [[0.0; 3]; 3];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[r][k] * next.m[k][c]).sum();
            }
        }
        AffineMap2D { m: out }
    }

    pub fn determinant(&self) -> f64 {
        let l = self.linear();
        l[0][0] * l[1][1] - l[0][1] * l[1][0]
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    /// Inverse map, or `None` if the linear part is singular.
    pub fn inverse(&self) -> Option<AffineMap2D> {
        let det = self.determinant();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let [[a, b], [c, d]] = self.linear();
        let t = self.translation_part();
        let (ia, ib, ic, id) = (d / det, -b / det, -c / det, a / det);
        Some(Self::from_parts(
            ia,
            ib,
            ic,
            id,
            -(ia * t.x + ib * t.y),
            -(ic * t.x + id * t.y),
        ))
    }
}

/// The unique affine map sending the vertices of `src` onto those of `dst`,
/// i.e. `A = (src*)⁻¹ dst*` with `t*` the 3x3 matrix of homogeneous vertex rows.
///
/// The system is solved relative to the first vertex of each triangle, which
/// is the same map but keeps the inverse well conditioned for triangles far
/// from the origin.
pub fn infer_affine(src: &Triangle, dst: &Triangle) -> Result<AffineMap2D> {
    if is_degenerate(src) {
        return Err(Error::SingularTriangle);
    }
    if src == dst {
        return Ok(AffineMap2D::IDENTITY);
    }
    let (e1, e2) = (src[1] - src[0], src[2] - src[0]);
    let (f1, f2) = (dst[1] - dst[0], dst[2] - dst[0]);
    let det = e1.cross(e2);
    if det == 0.0 || !det.is_finite() {
        return Err(Error::SingularTriangle);
    }
    // Rows e1, e2 times L = rows f1, f2  =>  L = E⁻¹ F.
    let inv = [[e2.y / det, -e1.y / det], [-e2.x / det, e1.x / det]];
    let l00 = inv[0][0] * f1.x + inv[0][1] * f2.x;
    let l01 = inv[0][0] * f1.y + inv[0][1] * f2.y;
    let l10 = inv[1][0] * f1.x + inv[1][1] * f2.x;
    let l11 = inv[1][0] * f1.y + inv[1][1] * f2.y;
    let tx = dst[0].x - (src[0].x * l00 + src[0].y * l10);
    let ty = dst[0].y - (src[0].x * l01 + src[0].y * l11);
    Ok(AffineMap2D {
        m: [[l00, l01, 0.0], [l10, l11, 0.0], [tx, ty, 1.0]],
    })
}

pub fn apply_affine(map: &AffineMap2D, points: &[Point2]) -> alloc::vec::Vec<Point2> {
    points.iter().map(|&p| map.apply(p)).collect()
}
