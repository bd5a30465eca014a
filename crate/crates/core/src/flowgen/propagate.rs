//! Pixel propagation through per-triangle affine maps.

use alloc::vec;
use alloc::vec::Vec;

use super::resample::ScatteredFlowSamples;
use crate::geometry::{
    infer_affine, is_degenerate, rasterize_with_tolerance, AffineMap2D, Barycentric, PixelPos,
    PixelRect, Point2, TriangleMesh,
};
use crate::ingest::ImageSize;
use crate::{Error, Result};

/// Barycentric slack when claiming pixels on shared edges; the partition
/// itself is decided by triangle order, so this only guards against
/// rounding on edges that pass exactly through pixel centres.
const EDGE_TOL: f64 = 1e-9;

/// Frame-0 pixels inside the landmark mesh, followed through the sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatedPixelSet {
    origin_pixels: Vec<PixelPos>,
    triangle_id: Vec<u32>,
    barycentric: Vec<Barycentric>,
    current_positions: Vec<Point2>,
}

impl PropagatedPixelSet {
    /// Rasterizes every non-degenerate triangle of `mesh` on the `size`
    /// grid. A pixel on an edge shared by several triangles belongs to the
    /// one with the lowest index.
    pub fn from_mesh(mesh: &TriangleMesh, size: ImageSize) -> Self {
        let grid = PixelRect::image(size.height, size.width);
        let mut owner = vec![u32::MAX; size.height * size.width];
        let mut bary = vec![Barycentric::from_edge_weights(0.0, 0.0); size.height * size.width];
        for t in 0..mesh.len() {
            let Ok(pixels) = rasterize_with_tolerance(&mesh.triangle(t), grid, EDGE_TOL) else {
                continue;
            };
            for (p, b) in pixels {
                let cell = p.y as usize * size.width + p.x as usize;
                if owner[cell] == u32::MAX {
                    owner[cell] = t as u32;
                    bary[cell] = b;
                }
            }
        }
        let mut set = PropagatedPixelSet {
            origin_pixels: Vec::new(),
            triangle_id: Vec::new(),
            barycentric: Vec::new(),
            current_positions: Vec::new(),
        };
        for (cell, &t) in owner.iter().enumerate() {
            if t == u32::MAX {
                continue;
            }
            let p = PixelPos::new((cell % size.width) as i64, (cell / size.width) as i64);
            set.origin_pixels.push(p);
            set.triangle_id.push(t);
            set.barycentric.push(bary[cell]);
            set.current_positions.push(p.to_point());
        }
        set
    }

    pub fn len(&self) -> usize {
        self.origin_pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origin_pixels.is_empty()
    }

    pub fn origin_pixels(&self) -> &[PixelPos] {
        &self.origin_pixels
    }

    pub fn triangle_id(&self) -> &[u32] {
        &self.triangle_id
    }

    /// Coordinates of each pixel within its frame-0 triangle. Affine maps
    /// preserve them, so they also place the pixel in every later frame.
    pub fn barycentric(&self) -> &[Barycentric] {
        &self.barycentric
    }

    pub fn current_positions(&self) -> &[Point2] {
        &self.current_positions
    }
}

/// One propagation step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput {
    /// Displacements anchored at the frame-(k−1) positions. Pixels of
    /// dropped triangles contribute no samples.
    pub samples: ScatteredFlowSamples,
    pub next: PropagatedPixelSet,
    /// Triangles whose affine map could not be inferred this step.
    pub dropped_triangles: Vec<u32>,
}

/// Moves every pixel by the affine map of its triangle from `mesh_prev` to
/// `mesh_next`. Pixels of triangles that are degenerate in either mesh
/// produce no sample; their positions are recovered from their barycentric
/// coordinates in the new triangle so they keep following the landmarks.
pub fn step_flow(
    prop: &PropagatedPixelSet,
    mesh_prev: &TriangleMesh,
    mesh_next: &TriangleMesh,
) -> Result<StepOutput> {
    if !mesh_prev.same_connectivity(mesh_next) {
        return Err(Error::DimensionMismatch {
            expected: (mesh_prev.vertices().len(), mesh_prev.len()),
            found: (mesh_next.vertices().len(), mesh_next.len()),
        });
    }
    // A triangle that is degenerate on either side of the step is dropped:
    // its source map is singular or it folds its pixels onto a line.
    let maps: Vec<Option<AffineMap2D>> = (0..mesh_prev.len())
        .map(|t| {
            let dst = mesh_next.triangle(t);
            if is_degenerate(&dst) {
                return None;
            }
            infer_affine(&mesh_prev.triangle(t), &dst).ok()
        })
        .collect();
    let dropped_triangles = maps
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_none())
        .map(|(t, _)| t as u32)
        .collect();

    let mut samples = ScatteredFlowSamples::with_capacity(prop.len());
    let mut next_positions = Vec::with_capacity(prop.len());
    for i in 0..prop.len() {
        let t = prop.triangle_id[i] as usize;
        let cur = prop.current_positions[i];
        let moved = match &maps[t] {
            Some(a) => {
                let moved = a.apply(cur);
                samples.push(cur, [moved.x - cur.x, moved.y - cur.y]);
                moved
            }
            None => prop.barycentric[i].point_in(&mesh_next.triangle(t)),
        };
        next_positions.push(moved);
    }
    Ok(StepOutput {
        samples,
        next: PropagatedPixelSet {
            origin_pixels: prop.origin_pixels.clone(),
            triangle_id: prop.triangle_id.clone(),
            barycentric: prop.barycentric.clone(),
            current_positions: next_positions,
        },
        dropped_triangles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::apply_affine;

    fn square_mesh() -> TriangleMesh {
        let v = alloc::vec![
            Point2::new(2.0, 2.0),
            Point2::new(12.0, 2.0),
            Point2::new(12.0, 12.0),
            Point2::new(2.0, 12.0),
        ];
        TriangleMesh::new(v, alloc::vec![[0, 1, 2], [0, 2, 3]]).unwrap()
    }

    #[test]
    fn shared_edge_pixels_are_claimed_once() {
        let set = PropagatedPixelSet::from_mesh(&square_mesh(), ImageSize::new(16, 16));
        assert_eq!(set.len(), 121);
        let diag = set
            .origin_pixels()
            .iter()
            .zip(set.triangle_id())
            .filter(|(p, _)| p.x == p.y)
            .all(|(_, &t)| t == 0);
        assert!(diag);
    }

    #[test]
    fn identical_meshes_give_zero_vectors() {
        let m = square_mesh();
        let set = PropagatedPixelSet::from_mesh(&m, ImageSize::new(16, 16));
        let out = step_flow(&set, &m, &m).unwrap();
        assert!(out.samples.vectors().iter().all(|v| *v == [0.0, 0.0]));
        assert_eq!(out.next.current_positions(), set.current_positions());
    }

    #[test]
    fn translation_moves_every_pixel() {
        let m = square_mesh();
        let set = PropagatedPixelSet::from_mesh(&m, ImageSize::new(16, 16));
        let next = m
            .reposition(
                m.vertices()
                    .iter()
                    .map(|&p| p + Point2::new(1.0, 2.0))
                    .collect(),
            )
            .unwrap();
        let out = step_flow(&set, &m, &next).unwrap();
        for v in out.samples.vectors() {
            assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_steps_compose() {
        let m0 = square_mesh();
        let a1 = AffineMap2D::from_parts(1.01, 0.02, -0.01, 0.99, 0.5, -0.3);
        let a2 = AffineMap2D::from_parts(0.98, -0.03, 0.015, 1.02, -0.2, 0.7);
        let m1 = m0.reposition(apply_affine(&a1, m0.vertices())).unwrap();
        let m2 = m1.reposition(apply_affine(&a2, m1.vertices())).unwrap();
        let set = PropagatedPixelSet::from_mesh(&m0, ImageSize::new(16, 16));
        let s1 = step_flow(&set, &m0, &m1).unwrap();
        let s2 = step_flow(&s1.next, &m1, &m2).unwrap();
        for (o, p) in set.origin_pixels().iter().zip(s2.next.current_positions()) {
            let want = a2.apply(a1.apply(o.to_point()));
            assert!((*p - want).norm() < 1e-7);
        }
    }

    #[test]
    fn collapsed_triangle_is_dropped_but_followed() {
        let m0 = square_mesh();
        let mut v = m0.vertices().to_vec();
        // Vertex 1 onto the diagonal: triangle 0 collapses, triangle 1 survives.
        v[1] = Point2::new(7.0, 7.0);
        let m1 = m0.reposition(v).unwrap();
        let set = PropagatedPixelSet::from_mesh(&m0, ImageSize::new(16, 16));
        let out = step_flow(&set, &m0, &m1).unwrap();
        assert_eq!(out.dropped_triangles, [0]);
        let kept = set.triangle_id().iter().filter(|&&t| t == 1).count();
        assert_eq!(out.samples.len(), kept);
        for (i, &t) in set.triangle_id().iter().enumerate() {
            if t == 0 {
                let want = set.barycentric()[i].point_in(&m1.triangle(0));
                assert_eq!(out.next.current_positions()[i], want);
            }
        }
    }
}
