use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::{is_degenerate, Point2, Triangle};
use crate::{Error, Result};

/// Vertices plus triangle connectivity. Triangles are stored
/// counter-clockwise (positive [`orient`](super::predicates::orient)).
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<Point2>,
    triangles: Vec<[u32; 3]>,
}

impl TriangleMesh {
    /// Builds a mesh, rejecting out-of-range indices, non-finite vertices
    /// and degenerate triangles.
    pub fn new(vertices: Vec<Point2>, triangles: Vec<[u32; 3]>) -> Result<Self> {
        let mesh = Self::with_connectivity(vertices, triangles)?;
        for t in 0..mesh.len() {
            if is_degenerate(&mesh.triangle(t)) {
                return Err(Error::SingularTriangle);
            }
        }
        Ok(mesh)
    }

    /// Same as [`TriangleMesh::new`] but tolerates degenerate triangles.
    /// Meshes that follow a deforming face may collapse a triangle for a
    /// frame; callers deal with that per triangle.
    pub fn with_connectivity(vertices: Vec<Point2>, triangles: Vec<[u32; 3]>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::DegenerateInput("non-finite vertex"));
        }
        let n = vertices.len();
        if triangles.iter().flatten().any(|&i| i as usize >= n) {
            return Err(Error::DegenerateInput("triangle index out of range"));
        }
        Ok(Self {
            vertices,
            triangles,
        })
    }

    /// This connectivity placed on a new set of vertex positions.
    pub fn reposition(&self, vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() != self.vertices.len() {
            return Err(Error::DimensionMismatch {
                expected: (self.vertices.len(), 1),
                found: (vertices.len(), 1),
            });
        }
        Self::with_connectivity(vertices, self.triangles.clone())
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    #[inline]
    pub fn triangle(&self, t: usize) -> Triangle {
        let [a, b, c] = self.triangles[t];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    pub fn same_connectivity(&self, other: &TriangleMesh) -> bool {
        self.vertices.len() == other.vertices.len() && self.triangles == other.triangles
    }

    /// For each triangle, the neighbour across the edge opposite vertex `k`.
    pub fn neighbors(&self) -> Vec<[Option<u32>; 3]> {
        // (min, max, triangle, local vertex opposite the edge)
        let mut edges: Vec<(u32, u32, u32, u8)> = Vec::with_capacity(self.triangles.len() * 3);
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let a = tri[(k + 1) % 3];
                let b = tri[(k + 2) % 3];
                edges.push((a.min(b), a.max(b), t as u32, k as u8));
            }
        }
        edges.sort_unstable();
        let mut out = alloc::vec![[None; 3]; self.triangles.len()];
        for pair in edges.windows(2) {
            let (x, y) = (pair[0], pair[1]);
            if x.0 == y.0 && x.1 == y.1 {
                out[x.2 as usize][x.3 as usize] = Some(y.2);
                out[y.2 as usize][y.3 as usize] = Some(x.2);
            }
        }
        out
    }

    /// Sorted, de-duplicated neighbour lists per vertex, in CSR form:
    /// the neighbours of `v` are `list[offsets[v]..offsets[v + 1]]`.
    pub fn vertex_adjacency(&self) -> (Vec<usize>, Vec<u32>) {
        let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(self.triangles.len() * 6);
        for tri in &self.triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                pairs.push((a, b));
                pairs.push((b, a));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = alloc::vec![0usize; self.vertices.len() + 1];
        for &(a, _) in &pairs {
            offsets[a as usize + 1] += 1;
        }
        for i in 0..self.vertices.len() {
            offsets[i + 1] += offsets[i];
        }
        (offsets, pairs.into_iter().map(|(_, b)| b).collect())
    }

    /// Vertices that belong to at least one triangle.
    pub fn used_vertex_count(&self) -> usize {
        let mut used = alloc::vec![false; self.vertices.len()];
        for &i in self.triangles.iter().flatten() {
            used[i as usize] = true;
        }
        used.iter().filter(|&&u| u).count()
    }

    /// OFF-style text dump: header, vertex lines, then `3 a b c` per triangle.
    pub fn to_off(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "OFF");
        let _ = writeln!(s, "{} {} 0", self.vertices.len(), self.triangles.len());
        for p in &self.vertices {
            let _ = writeln!(s, "{} {} 0", p.x, p.y);
        }
        for [a, b, c] in &self.triangles {
            let _ = writeln!(s, "3 {a} {b} {c}");
        }
        s
    }
}
