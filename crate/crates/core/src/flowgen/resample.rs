//! Scattered-data interpolation of flow samples onto the integer grid.
//!
//! Both methods triangulate the anchors. The linear method blends vertex
//! values barycentrically. The cubic method is a Clough–Tocher split-cubic
//! element: each triangle is split at its centroid into three cubic Bézier
//! patches that are C¹ across all edges, driven by vertex values and
//! gradients. Gradients come from a weighted local least-squares quadratic
//! fit over the vertex's mesh neighbourhood.

use alloc::vec;
use alloc::vec::Vec;

use crate::flow::FlowField;
use crate::geometry::{delaunay, PixelRect, Point2, TriangleMesh};
use crate::ingest::{ImageSize, ResampleMethod};
use crate::{Error, Result};

/// Barycentric slack used when deciding whether a grid point is covered.
const COVER_TOL: f64 = 1e-9;

/// Displacements anchored at real-valued positions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScatteredFlowSamples {
    anchors: Vec<Point2>,
    vectors: Vec<[f64; 2]>,
}

impl ScatteredFlowSamples {
    pub fn new(anchors: Vec<Point2>, vectors: Vec<[f64; 2]>) -> Result<Self> {
        if anchors.len() != vectors.len() {
            return Err(Error::DimensionMismatch {
                expected: (anchors.len(), 2),
                found: (vectors.len(), 2),
            });
        }
        if anchors.iter().any(|p| !p.is_finite())
            || vectors.iter().flatten().any(|c| !c.is_finite())
        {
            return Err(Error::DegenerateInput("non-finite flow sample"));
        }
        Ok(Self { anchors, vectors })
    }

    pub(crate) fn with_capacity(n: usize) -> Self {
        Self {
            anchors: Vec::with_capacity(n),
            vectors: Vec::with_capacity(n),
        }
    }

    pub(crate) fn push(&mut self, anchor: Point2, vector: [f64; 2]) {
        self.anchors.push(anchor);
        self.vectors.push(vector);
    }

    pub fn anchors(&self) -> &[Point2] {
        &self.anchors
    }

    pub fn vectors(&self) -> &[[f64; 2]] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    /// Keeps only samples anchored inside the closed image rectangle.
    pub fn retain_within(&self, size: ImageSize) -> ScatteredFlowSamples {
        let (w, h) = ((size.width - 1) as f64, (size.height - 1) as f64);
        let mut out = ScatteredFlowSamples::with_capacity(self.len());
        for (&p, &v) in self.anchors.iter().zip(&self.vectors) {
            if p.x >= 0.0 && p.y >= 0.0 && p.x <= w && p.y <= h {
                out.push(p, v);
            }
        }
        out
    }
}

/// Interpolates `samples` at every integer pixel of a `size` grid inside the
/// anchors' convex hull; everything else is zero. Exact at anchors that sit
/// on integer pixels.
pub fn resample_to_grid(
    samples: &ScatteredFlowSamples,
    size: ImageSize,
    method: ResampleMethod,
) -> Result<FlowField> {
    let interp = ScatteredInterpolator::new(samples, method)?;
    let mut field = FlowField::zeros(size.height, size.width)?;
    interp.fill_grid(&mut field);
    Ok(field)
}

/// Triangulated scattered data, ready to be evaluated on a grid.
pub(crate) struct ScatteredInterpolator<'a> {
    mesh: TriangleMesh,
    values: &'a [[f64; 2]],
    method: ResampleMethod,
    gradients: Vec<[[f64; 2]; 2]>,
    neighbors: Vec<[Option<u32>; 3]>,
}

impl<'a> ScatteredInterpolator<'a> {
    pub(crate) fn new(samples: &'a ScatteredFlowSamples, method: ResampleMethod) -> Result<Self> {
        let mesh = delaunay(&samples.anchors)?;
        let (gradients, neighbors) = match method {
            ResampleMethod::PiecewiseLinear => (Vec::new(), Vec::new()),
            ResampleMethod::PiecewiseCubic => (
                estimate_gradients(&mesh, &samples.vectors),
                mesh.neighbors(),
            ),
        };
        Ok(Self {
            mesh,
            values: &samples.vectors,
            method,
            gradients,
            neighbors,
        })
    }

    pub(crate) fn fill_grid(&self, field: &mut FlowField) {
        let (h, w) = field.size();
        let grid = PixelRect::image(h, w);
        let mut done = vec![false; h * w];
        for t in 0..self.mesh.len() {
            let tri = self.mesh.triangle(t);
            let idx = self.mesh.triangles()[t].map(|i| i as usize);
            let Some(scan) = PixelRect::around(&tri).intersect(&grid) else {
                continue;
            };
            let e1 = tri[1] - tri[0];
            let e2 = tri[2] - tri[0];
            let det = e1.cross(e2);
            if det == 0.0 {
                continue;
            }
            let patch = match self.method {
                ResampleMethod::PiecewiseCubic => Some(self.cubic_patches(t, &tri, idx)),
                ResampleMethod::PiecewiseLinear => None,
            };
            for y in scan.y0..=scan.y1 {
                for x in scan.x0..=scan.x1 {
                    let cell = y as usize * w + x as usize;
                    if done[cell] {
                        continue;
                    }
                    let r = Point2::new(x as f64, y as f64) - tri[0];
                    let b1 = r.cross(e2) / det;
                    let b2 = e1.cross(r) / det;
                    let b0 = 1.0 - b1 - b2;
                    if b0 < -COVER_TOL || b1 < -COVER_TOL || b2 < -COVER_TOL {
                        continue;
                    }
                    let b = clamp_barycentric([b0, b1, b2]);
                    let uv = match &patch {
                        Some(p) => [p[0].eval(b), p[1].eval(b)],
                        None => {
                            let mut out = [0.0; 2];
                            for (c, o) in out.iter_mut().enumerate() {
                                *o = b[0] * self.values[idx[0]][c]
                                    + b[1] * self.values[idx[1]][c]
                                    + b[2] * self.values[idx[2]][c];
                            }
                            out
                        }
                    };
                    field.set(x as usize, y as usize, uv);
                    done[cell] = true;
                }
            }
        }
    }

    /// Evaluates the interpolant at an arbitrary point, if it is covered.
    #[cfg(test)]
    pub(crate) fn eval(&self, q: Point2) -> Option<[f64; 2]> {
        for t in 0..self.mesh.len() {
            let tri = self.mesh.triangle(t);
            let e1 = tri[1] - tri[0];
            let e2 = tri[2] - tri[0];
            let det = e1.cross(e2);
            let r = q - tri[0];
            let b1 = r.cross(e2) / det;
            let b2 = e1.cross(r) / det;
            let b0 = 1.0 - b1 - b2;
            if b0 < -COVER_TOL || b1 < -COVER_TOL || b2 < -COVER_TOL {
                continue;
            }
            let b = clamp_barycentric([b0, b1, b2]);
            let idx = self.mesh.triangles()[t].map(|i| i as usize);
            return Some(match self.method {
                ResampleMethod::PiecewiseCubic => {
                    let p = self.cubic_patches(t, &tri, idx);
                    [p[0].eval(b), p[1].eval(b)]
                }
                ResampleMethod::PiecewiseLinear => {
                    let v = |c: usize| {
                        b[0] * self.values[idx[0]][c]
                            + b[1] * self.values[idx[1]][c]
                            + b[2] * self.values[idx[2]][c]
                    };
                    [v(0), v(1)]
                }
            });
        }
        None
    }

    fn cubic_patches(&self, t: usize, tri: &[Point2; 3], idx: [usize; 3]) -> [CloughTocher; 2] {
        // Per-edge direction parameters, shared with the neighbour across
        // the edge so derivatives match there.
        let mut g = [-0.5; 3];
        for (k, gk) in g.iter_mut().enumerate() {
            let Some(nb) = self.neighbors[t][k] else {
                continue;
            };
            let nt = self.mesh.triangle(nb as usize);
            let centroid = Point2::new(
                (nt[0].x + nt[1].x + nt[2].x) / 3.0,
                (nt[0].y + nt[1].y + nt[2].y) / 3.0,
            );
            let c = barycentric_of(centroid, tri);
            *gk = match k {
                0 => (2.0 * c[2] + c[1] - 1.0) / (2.0 - 3.0 * c[2] - 3.0 * c[1]),
                1 => (2.0 * c[0] + c[2] - 1.0) / (2.0 - 3.0 * c[0] - 3.0 * c[2]),
                _ => (2.0 * c[1] + c[0] - 1.0) / (2.0 - 3.0 * c[1] - 3.0 * c[0]),
            };
        }
        let comp = |c: usize| {
            let f = idx.map(|i| self.values[i][c]);
            let df = idx.map(|i| self.gradients[i][c]);
            CloughTocher::new(tri, f, df, g)
        };
        [comp(0), comp(1)]
    }
}

fn barycentric_of(q: Point2, tri: &[Point2; 3]) -> [f64; 3] {
    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let det = e1.cross(e2);
    let r = q - tri[0];
    let b1 = r.cross(e2) / det;
    let b2 = e1.cross(r) / det;
    [1.0 - b1 - b2, b1, b2]
}

fn clamp_barycentric(b: [f64; 3]) -> [f64; 3] {
    if b.iter().all(|&v| v >= 0.0) {
        return b;
    }
    let c = b.map(|v| v.max(0.0));
    let s = c[0] + c[1] + c[2];
    c.map(|v| v / s)
}

/// Bézier control values of one Clough–Tocher element, named by their
/// multi-index over (v0, v1, v2, centroid).
struct CloughTocher {
    c3000: f64,
    c0300: f64,
    c0030: f64,
    c2100: f64,
    c2010: f64,
    c1200: f64,
    c0210: f64,
    c1020: f64,
    c0120: f64,
    c2001: f64,
    c0201: f64,
    c0021: f64,
    c1101: f64,
    c1011: f64,
    c0111: f64,
    c1002: f64,
    c0102: f64,
    c0012: f64,
    c0003: f64,
}

impl CloughTocher {
    fn new(p: &[Point2; 3], f: [f64; 3], df: [[f64; 2]; 3], g: [f64; 3]) -> Self {
        let e12 = p[1] - p[0];
        let e23 = p[2] - p[1];
        let e31 = p[0] - p[2];
        let d = |k: usize, e: Point2| df[k][0] * e.x + df[k][1] * e.y;

        let df12 = d(0, e12);
        let df21 = -d(1, e12);
        let df23 = d(1, e23);
        let df32 = -d(2, e23);
        let df31 = d(2, e31);
        let df13 = -d(0, e31);

        let c3000 = f[0];
        let c2100 = (df12 + 3.0 * c3000) / 3.0;
        let c2010 = (df13 + 3.0 * c3000) / 3.0;
        let c0300 = f[1];
        let c1200 = (df21 + 3.0 * c0300) / 3.0;
        let c0210 = (df23 + 3.0 * c0300) / 3.0;
        let c0030 = f[2];
        let c1020 = (df31 + 3.0 * c0030) / 3.0;
        let c0120 = (df32 + 3.0 * c0030) / 3.0;

        let c2001 = (c2100 + c2010 + c3000) / 3.0;
        let c0201 = (c1200 + c0300 + c0210) / 3.0;
        let c0021 = (c1020 + c0120 + c0030) / 3.0;

        // Cross-boundary derivative along each edge is forced to be linear.
        let c0111 = (g[0] * (-c0300 + 3.0 * c0210 - 3.0 * c0120 + c0030)
            + (-c0300 + 2.0 * c0210 - c0120 + c0021 + c0201))
            / 2.0;
        let c1011 = (g[1] * (-c0030 + 3.0 * c1020 - 3.0 * c2010 + c3000)
            + (-c0030 + 2.0 * c1020 - c2010 + c2001 + c0021))
            / 2.0;
        let c1101 = (g[2] * (-c3000 + 3.0 * c2100 - 3.0 * c1200 + c0300)
            + (-c3000 + 2.0 * c2100 - c1200 + c2001 + c0201))
            / 2.0;

        let c1002 = (c1101 + c1011 + c2001) / 3.0;
        let c0102 = (c1101 + c0111 + c0201) / 3.0;
        let c0012 = (c1011 + c0111 + c0021) / 3.0;
        let c0003 = (c1002 + c0102 + c0012) / 3.0;

        Self {
            c3000,
            c0300,
            c0030,
            c2100,
            c2010,
            c1200,
            c0210,
            c1020,
            c0120,
            c2001,
            c0201,
            c0021,
            c1101,
            c1011,
            c0111,
            c1002,
            c0102,
            c0012,
            c0003,
        }
    }

    /// Evaluates at barycentric `b` (non-negative, summing to one).
    fn eval(&self, b: [f64; 3]) -> f64 {
        // Coordinates within the sub-triangle that contains the point; one
        // of b1..b3 is zero.
        let m = b[0].min(b[1]).min(b[2]);
        let (b1, b2, b3, b4) = (b[0] - m, b[1] - m, b[2] - m, 3.0 * m);
        let c = self;
        b1 * b1 * b1 * c.c3000
            + 3.0 * b1 * b1 * b2 * c.c2100
            + 3.0 * b1 * b1 * b3 * c.c2010
            + 3.0 * b1 * b1 * b4 * c.c2001
            + 3.0 * b1 * b2 * b2 * c.c1200
            + 6.0 * b1 * b2 * b4 * c.c1101
            + 3.0 * b1 * b3 * b3 * c.c1020
            + 6.0 * b1 * b3 * b4 * c.c1011
            + 3.0 * b1 * b4 * b4 * c.c1002
            + b2 * b2 * b2 * c.c0300
            + 3.0 * b2 * b2 * b3 * c.c0210
            + 3.0 * b2 * b2 * b4 * c.c0201
            + 3.0 * b2 * b3 * b3 * c.c0120
            + 6.0 * b2 * b3 * b4 * c.c0111
            + 3.0 * b2 * b4 * b4 * c.c0102
            + b3 * b3 * b3 * c.c0030
            + 3.0 * b3 * b3 * b4 * c.c0021
            + 3.0 * b3 * b4 * b4 * c.c0012
            + b4 * b4 * b4 * c.c0003
    }
}

/// Per-vertex gradients `[component][d/dx, d/dy]`.
fn estimate_gradients(mesh: &TriangleMesh, values: &[[f64; 2]]) -> Vec<[[f64; 2]; 2]> {
    let (offsets, adj) = mesh.vertex_adjacency();
    let pts = mesh.vertices();
    let ring = |v: usize| &adj[offsets[v]..offsets[v + 1]];
    let mut out = vec![[[0.0; 2]; 2]; pts.len()];
    let mut hood: Vec<u32> = Vec::new();
    for v in 0..pts.len() {
        let one = ring(v);
        if one.is_empty() {
            continue;
        }
        hood.clear();
        hood.extend_from_slice(one);
        if hood.len() < 7 {
            for &n in one {
                hood.extend_from_slice(ring(n as usize));
            }
            hood.sort_unstable();
            hood.dedup();
            hood.retain(|&n| n as usize != v);
        }
        out[v] = fit_gradient(
            pts[v],
            values[v],
            hood.iter().map(|&n| (pts[n as usize], values[n as usize])),
        );
    }
    out
}

/// Weighted least squares for `f(p + d) ≈ f(p) + g·d + ½ dᵀHd` over the
/// neighbourhood, falling back to a plane when the quadratic is
/// under-determined.
fn fit_gradient(
    at: Point2,
    f0: [f64; 2],
    hood: impl Iterator<Item = (Point2, [f64; 2])> + Clone,
) -> [[f64; 2]; 2] {
    let scale = {
        let (mut s, mut n) = (0.0, 0usize);
        for (p, _) in hood.clone() {
            s += (p - at).norm();
            n += 1;
        }
        if n == 0 || s == 0.0 {
            return [[0.0; 2]; 2];
        }
        s / n as f64
    };

    for unknowns in [5usize, 2] {
        let mut ata = [[0.0f64; 5]; 5];
        let mut atb = [[0.0f64; 2]; 5];
        let mut rows = 0;
        for (p, f) in hood.clone() {
            let d = (p - at) * (1.0 / scale);
            let r2 = d.dot(d);
            if r2 == 0.0 {
                continue;
            }
            let w = 1.0 / r2;
            let row = [d.x, d.y, 0.5 * d.x * d.x, d.x * d.y, 0.5 * d.y * d.y];
            for i in 0..unknowns {
                for j in 0..unknowns {
                    ata[i][j] += w * row[i] * row[j];
                }
                for c in 0..2 {
                    atb[i][c] += w * row[i] * (f[c] - f0[c]);
                }
            }
            rows += 1;
        }
        if rows < unknowns {
            continue;
        }
        if let Some(sol) = solve_spd(&mut ata, &mut atb, unknowns) {
            return [
                [sol[0][0] / scale, sol[1][0] / scale],
                [sol[0][1] / scale, sol[1][1] / scale],
            ];
        }
    }
    [[0.0; 2]; 2]
}

/// Gaussian elimination with partial pivoting on the leading `n x n` block;
/// returns `None` for (numerically) singular systems.
fn solve_spd(a: &mut [[f64; 5]; 5], b: &mut [[f64; 2]; 5], n: usize) -> Option<[[f64; 2]; 5]> {
    let norm = (0..n).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    if norm == 0.0 {
        return None;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-10 * norm {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for k in col..n {
                a[r][k] -= f * a[col][k];
            }
            for c in 0..2 {
                b[r][c] -= f * b[col][c];
            }
        }
    }
    let mut x = [[0.0; 2]; 5];
    for r in (0..n).rev() {
        for c in 0..2 {
            let mut s = b[r][c];
            for k in r + 1..n {
                s -= a[r][k] * x[k][c];
            }
            x[r][c] = s / a[r][r];
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scattered(n: usize, extent: f64, seed: u64) -> Vec<Point2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = alloc::vec![
            Point2::new(0.0, 0.0),
            Point2::new(extent, 0.0),
            Point2::new(extent, extent),
            Point2::new(0.0, extent),
        ];
        for _ in 0..n {
            pts.push(Point2::new(
                rng.gen_range(0.0..extent),
                rng.gen_range(0.0..extent),
            ));
        }
        pts
    }

    fn samples_of(pts: &[Point2], f: impl Fn(Point2) -> [f64; 2]) -> ScatteredFlowSamples {
        ScatteredFlowSamples::new(pts.to_vec(), pts.iter().map(|&p| f(p)).collect()).unwrap()
    }

    #[test]
    fn quadratic_fields_are_reproduced_by_the_cubic_element() {
        // A quadratic has exact local quadratic fits, hence exact gradients,
        // and lies in the Clough–Tocher space.
        let pts = scattered(300, 40.0, 3);
        let f = |p: Point2| {
            [
                0.01 * p.x * p.x - 0.02 * p.x * p.y + 0.5 * p.y,
                0.003 * p.y * p.y + p.x,
            ]
        };
        let s = samples_of(&pts, f);
        let interp = ScatteredInterpolator::new(&s, ResampleMethod::PiecewiseCubic).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let q = Point2::new(rng.gen_range(0.5..39.5), rng.gen_range(0.5..39.5));
            let got = interp.eval(q).unwrap();
            let want = f(q);
            assert!(
                (got[0] - want[0]).abs() < 1e-8 && (got[1] - want[1]).abs() < 1e-8,
                "{q:?}"
            );
        }
    }

    #[test]
    fn cubic_element_is_c1_across_edges() {
        // Non-polynomial data, so only the element's own smoothness is tested:
        // one-sided difference quotients straddling every interior edge agree.
        // A jittered grid keeps the triangles well shaped, so the quotients'
        // curvature error stays small.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut pts = Vec::new();
        for j in 0..12 {
            for i in 0..12 {
                pts.push(Point2::new(
                    3.0 * i as f64 + rng.gen_range(-0.8..0.8),
                    3.0 * j as f64 + rng.gen_range(-0.8..0.8),
                ));
            }
        }
        let s = samples_of(&pts, |p| [libm::sin(p.x / 4.0) * libm::cos(p.y / 5.0), 0.0]);
        let interp = ScatteredInterpolator::new(&s, ResampleMethod::PiecewiseCubic).unwrap();
        let mesh = &interp.mesh;
        let neighbors = mesh.neighbors();
        // Richardson-extrapolated one-sided quotients cancel the curvature
        // term, which is large on the thin triangles along the hull.
        let one_sided = |p: Point2, dir: Point2| {
            let f0 = interp.eval(p).unwrap()[0];
            let q = |h: f64| (interp.eval(p + dir * h).unwrap()[0] - f0) / h;
            2.0 * q(5e-5) - q(1e-4)
        };
        let mut checked = 0;
        for t in 0..mesh.len() {
            for k in 0..3 {
                if neighbors[t][k].is_none() {
                    continue;
                }
                let tri = mesh.triangle(t);
                let (a, b) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
                let mid = a + (b - a) * 0.37;
                let e = b - a;
                let n = Point2::new(-e.y, e.x) * (1.0 / e.norm());
                let plus = one_sided(mid, n);
                let minus = -one_sided(mid, n * -1.0);
                let tol = 1e-4 * plus.abs().max(1.0);
                assert!(
                    (plus - minus).abs() < tol,
                    "edge {t}/{k}: {plus} vs {minus}"
                );
                checked += 1;
            }
        }
        assert!(checked > 300);
    }

    #[test]
    fn collinear_anchors_are_rejected() {
        let pts: Vec<_> = (0..10).map(|i| Point2::new(i as f64, i as f64)).collect();
        let s = samples_of(&pts, |_| [1.0, 1.0]);
        assert!(matches!(
            resample_to_grid(&s, ImageSize::new(10, 10), ResampleMethod::PiecewiseCubic),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn samples_outside_image_are_dropped() {
        let s = ScatteredFlowSamples::new(
            alloc::vec![
                Point2::new(-0.5, 1.0),
                Point2::new(2.0, 3.0),
                Point2::new(9.0, 3.0)
            ],
            alloc::vec![[1.0, 1.0]; 3],
        )
        .unwrap();
        assert_eq!(s.retain_within(ImageSize::new(5, 9)).len(), 1);
    }
}
