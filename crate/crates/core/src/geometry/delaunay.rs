//! Incremental Bowyer–Watson triangulation.
//!
//! The convex hull is closed off with "ghost" triangles that share a
//! vertex at infinity, so points outside the current hull are inserted
//! exactly like interior ones. Orientation and in-circle signs come from
//! adaptive exact predicates. After insertion, quads whose four vertices
//! are cocircular are flipped so their diagonal touches the lowest vertex
//! index, which makes the mesh a deterministic function of the input.

use alloc::vec;
use alloc::vec::Vec;

use super::predicates::{incircle, orient};
use super::{Point2, TriangleMesh};
use crate::{Error, Result};

const GHOST: u32 = u32::MAX;
const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Tri {
    /// Counter-clockwise. A ghost keeps its infinite vertex in slot 2.
    v: [u32; 3],
    /// `n[k]` is across the edge `v[k+1] -> v[k+2]`.
    n: [u32; 3],
}

impl Tri {
    #[inline]
    fn is_ghost(&self) -> bool {
        self.v[2] == GHOST
    }

    /// Local index of the vertex opposite the directed edge `a -> b`.
    #[inline]
    fn opposite_of_edge(&self, a: u32, b: u32) -> Option<usize> {
        (0..3).find(|&k| self.v[(k + 1) % 3] == a && self.v[(k + 2) % 3] == b)
    }
}

enum Located {
    Triangle(u32),
    Duplicate,
}

struct Builder<'a> {
    pts: &'a [Point2],
    tris: Vec<Tri>,
    alive: Vec<bool>,
    free: Vec<u32>,
    last_solid: u32,
    // scratch
    mark: Vec<u32>,
    epoch: u32,
}

/// Delaunay triangulation of `points`.
///
/// Exact duplicates of an earlier point are left out of the connectivity
/// (they stay in the vertex list, unreferenced). Fails with
/// `DegenerateInput` for fewer than three distinct points, all-collinear
/// input or non-finite coordinates.
pub fn delaunay(points: &[Point2]) -> Result<TriangleMesh> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::DegenerateInput("non-finite point"));
    }
    if points.len() < 3 {
        return Err(Error::DegenerateInput("fewer than three points"));
    }
    let seed = seed_triangle(points)?;
    let mut b = Builder::new(points, seed);
    for i in 0..points.len() as u32 {
        if seed.contains(&i) {
            continue;
        }
        b.insert(i);
    }
    b.normalize_cocircular();
    let triangles = b.finish();
    TriangleMesh::with_connectivity(points.to_vec(), triangles)
}

fn seed_triangle(points: &[Point2]) -> Result<[u32; 3]> {
    let i0 = 0usize;
    let i1 = (1..points.len())
        .find(|&j| points[j] != points[i0])
        .ok_or(Error::DegenerateInput("all points coincide"))?;
    let i2 = (i1 + 1..points.len())
        .find(|&j| orient(points[i0], points[i1], points[j]) != 0.0)
        .ok_or(Error::DegenerateInput("all points are collinear"))?;
    let (a, b, c) = (i0 as u32, i1 as u32, i2 as u32);
    if orient(points[i0], points[i1], points[i2]) > 0.0 {
        Ok([a, b, c])
    } else {
        Ok([a, c, b])
    }
}

impl<'a> Builder<'a> {
    fn new(pts: &'a [Point2], seed: [u32; 3]) -> Self {
        let mut b = Builder {
            pts,
            tris: Vec::with_capacity(pts.len() * 2 + 8),
            alive: Vec::with_capacity(pts.len() * 2 + 8),
            free: Vec::new(),
            last_solid: 0,
            mark: Vec::new(),
            epoch: 0,
        };
        let mut ids = vec![b.alloc([seed[0], seed[1], seed[2]])];
        for k in 0..3 {
            let a = seed[(k + 1) % 3];
            let c = seed[(k + 2) % 3];
            ids.push(b.alloc([c, a, GHOST]));
        }
        b.link_among(&ids);
        b.last_solid = ids[0];
        b
    }

    fn alloc(&mut self, v: [u32; 3]) -> u32 {
        let tri = Tri { v, n: [NONE; 3] };
        if let Some(id) = self.free.pop() {
            self.tris[id as usize] = tri;
            self.alive[id as usize] = true;
            id
        } else {
            self.tris.push(tri);
            self.alive.push(true);
            self.mark.push(0);
            (self.tris.len() - 1) as u32
        }
    }

    #[inline]
    fn p(&self, i: u32) -> Point2 {
        self.pts[i as usize]
    }

    /// Pairs up matching directed edges among `ids`.
    fn link_among(&mut self, ids: &[u32]) {
        let mut edges: Vec<(u32, u32, bool, u32, u8)> = Vec::with_capacity(ids.len() * 3);
        for &t in ids {
            let v = self.tris[t as usize].v;
            for k in 0..3 {
                let (a, b) = (v[(k + 1) % 3], v[(k + 2) % 3]);
                edges.push((a.min(b), a.max(b), a < b, t, k as u8));
            }
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            let (x, y) = (w[0], w[1]);
            if x.0 == y.0 && x.1 == y.1 && x.2 != y.2 {
                self.tris[x.3 as usize].n[x.4 as usize] = y.3;
                self.tris[y.3 as usize].n[y.4 as usize] = x.3;
            }
        }
    }

    /// Whether `p` conflicts with triangle `t`: strictly inside its
    /// circumcircle, or for a ghost, strictly outside its hull edge or in
    /// the open edge segment.
    fn conflicts(&self, t: u32, p: Point2) -> bool {
        let tri = &self.tris[t as usize];
        if tri.is_ghost() {
            let (u, w) = (self.p(tri.v[0]), self.p(tri.v[1]));
            let o = orient(u, w, p);
            o > 0.0 || (o == 0.0 && (p - u).dot(w - u) > 0.0 && (p - w).dot(u - w) > 0.0)
        } else {
            let [a, b, c] = tri.v;
            incircle(self.p(a), self.p(b), self.p(c), p) > 0.0
        }
    }

    fn locate(&self, p: Point2) -> Located {
        let mut t = self.last_solid;
        let limit = 4 * self.tris.len() + 64;
        for step in 0..limit {
            let tri = &self.tris[t as usize];
            if tri.is_ghost() {
                return Located::Triangle(t);
            }
            let mut next = None;
            for i in 0..3 {
                let k = (i + step) % 3;
                let a = self.p(tri.v[(k + 1) % 3]);
                let b = self.p(tri.v[(k + 2) % 3]);
                if orient(a, b, p) < 0.0 {
                    next = Some(tri.n[k]);
                    break;
                }
            }
            match next {
                Some(n) => t = n,
                None => {
                    if tri.v.iter().any(|&v| self.p(v) == p) {
                        return Located::Duplicate;
                    }
                    return Located::Triangle(t);
                }
            }
        }
        self.locate_exhaustive(p)
    }

    fn locate_exhaustive(&self, p: Point2) -> Located {
        for (t, tri) in self.tris.iter().enumerate() {
            if !self.alive[t] || tri.is_ghost() {
                continue;
            }
            let [a, b, c] = tri.v.map(|v| self.p(v));
            if orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0 {
                if a == p || b == p || c == p {
                    return Located::Duplicate;
                }
                return Located::Triangle(t as u32);
            }
        }
        for t in 0..self.tris.len() as u32 {
            if self.alive[t as usize] && self.tris[t as usize].is_ghost() && self.conflicts(t, p) {
                return Located::Triangle(t);
            }
        }
        unreachable!("point is neither inside the hull nor visible from any hull edge")
    }

    fn insert(&mut self, pi: u32) {
        let p = self.p(pi);
        let start = match self.locate(p) {
            Located::Duplicate => return,
            Located::Triangle(t) => t,
        };

        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;

        // Flood the cavity.
        let mut cavity = vec![start];
        let mut stack = vec![start];
        self.mark[start as usize] = epoch;
        let mut boundary: Vec<(u32, u32, u32)> = Vec::new();
        while let Some(t) = stack.pop() {
            let tri = self.tris[t as usize];
            for k in 0..3 {
                let nb = tri.n[k];
                if self.mark[nb as usize] == epoch {
                    continue;
                }
                if self.conflicts(nb, p) {
                    self.mark[nb as usize] = epoch;
                    cavity.push(nb);
                    stack.push(nb);
                }
            }
        }
        for &t in &cavity {
            let tri = self.tris[t as usize];
            for k in 0..3 {
                let nb = tri.n[k];
                if self.mark[nb as usize] != epoch {
                    boundary.push((tri.v[(k + 1) % 3], tri.v[(k + 2) % 3], nb));
                }
            }
        }

        for &t in &cavity {
            self.alive[t as usize] = false;
            self.free.push(t);
        }
        // Reuse the cavity slots in a fixed order.
        self.free.sort_unstable_by(|a, b| b.cmp(a));

        let mut created = Vec::with_capacity(boundary.len());
        for &(a, b, outer) in &boundary {
            let v = if a == GHOST {
                [b, pi, GHOST]
            } else if b == GHOST {
                [pi, a, GHOST]
            } else {
                [a, b, pi]
            };
            let id = self.alloc(v);
            // hook up the outer neighbour across (a, b)
            let k = self.tris[id as usize]
                .opposite_of_edge(a, b)
                .expect("new triangle keeps its base edge");
            self.tris[id as usize].n[k] = outer;
            let ko = self.tris[outer as usize]
                .opposite_of_edge(b, a)
                .expect("outer triangle shares the cavity edge");
            self.tris[outer as usize].n[ko] = id;
            if v[2] != GHOST {
                self.last_solid = id;
            }
            created.push(id);
        }
        self.link_among(&created);
    }

    fn replace_neighbor(&mut self, t: u32, old: u32, new: u32) {
        if t == NONE {
            return;
        }
        for n in self.tris[t as usize].n.iter_mut() {
            if *n == old {
                *n = new;
                return;
            }
        }
    }

    /// Flips illegal edges and applies the lowest-index diagonal rule to
    /// cocircular quads.
    fn normalize_cocircular(&mut self) {
        let mut stack: Vec<u32> = (0..self.tris.len() as u32)
            .filter(|&t| self.alive[t as usize] && !self.tris[t as usize].is_ghost())
            .collect();
        stack.reverse();
        while let Some(t) = stack.pop() {
            if !self.alive[t as usize] || self.tris[t as usize].is_ghost() {
                continue;
            }
            for k in 0..3 {
                let tri = self.tris[t as usize];
                let nb = tri.n[k];
                let ntri = self.tris[nb as usize];
                if ntri.is_ghost() {
                    continue;
                }
                let (c, a, b) = (tri.v[k], tri.v[(k + 1) % 3], tri.v[(k + 2) % 3]);
                let Some(k2) = ntri.opposite_of_edge(b, a) else {
                    continue;
                };
                let d = ntri.v[k2];
                let s = incircle(self.p(a), self.p(b), self.p(c), self.p(d));
                let flip = s > 0.0 || (s == 0.0 && c.min(d) < a.min(b));
                if !flip {
                    continue;
                }
                // Quad a, d, b, c (counter-clockwise); new diagonal c-d.
                let n_bc = tri.n[(k + 1) % 3];
                let n_ca = tri.n[(k + 2) % 3];
                let n_ad = ntri.n[(k2 + 1) % 3];
                let n_db = ntri.n[(k2 + 2) % 3];
                debug_assert_eq!(ntri.v[(k2 + 1) % 3], b);
                // t becomes (a, d, c), nb becomes (d, b, c)
                self.tris[t as usize] = Tri {
                    v: [a, d, c],
                    n: [nb, n_ca, n_ad],
                };
                self.tris[nb as usize] = Tri {
                    v: [d, b, c],
                    n: [n_bc, t, n_db],
                };
                self.replace_neighbor(n_ad, nb, t);
                self.replace_neighbor(n_bc, t, nb);
                stack.push(nb);
                stack.push(t);
                break;
            }
        }
    }

    fn finish(self) -> Vec<[u32; 3]> {
        let mut out: Vec<[u32; 3]> = self
            .tris
            .iter()
            .zip(&self.alive)
            .filter(|(t, &alive)| alive && !t.is_ghost())
            .map(|(t, _)| {
                let [a, b, c] = t.v;
                if a <= b && a <= c {
                    [a, b, c]
                } else if b <= a && b <= c {
                    [b, c, a]
                } else {
                    [c, a, b]
                }
            })
            .collect();
        out.sort_unstable();
        out
    }
}
