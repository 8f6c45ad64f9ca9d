//! Indexed triangle meshes: quarter-grid sampling, reflected assembly with
//! seam welding, and combinatorial queries.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::kernel::Vec3;
use crate::pillow::QuarterMap;

/// Vertex on the horizontal end `v = ζ(s)`.
pub const TAG_HORIZONTAL: u8 = 1;
/// Vertex on the vertical end `v = ζ(s) − b`.
pub const TAG_VERTICAL: u8 = 2;
/// Vertex on the `s = 0` or `s = L` column.
pub const TAG_END: u8 = 4;
/// Vertex on the crease row `v = 0`.
pub const TAG_CREASE: u8 = 8;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
    /// Welded edges joining two different reflected pieces, as sorted pairs.
    pub seam_edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeStats {
    pub edges: usize,
    pub boundary: usize,
    pub nonmanifold: usize,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        if let Some(t) = triangles.iter().find(|t| t.iter().any(|&i| i >= n)) {
            return Err(Error::InvalidInput(format!("triangle {t:?} indexes past {n} vertices")));
        }
        Ok(Self { vertices, triangles, seam_edges: Vec::new() })
    }

    /// Undirected edge → incident triangle count.
    pub fn edge_map(&self) -> HashMap<[usize; 2], usize> {
        let mut map = HashMap::with_capacity(self.triangles.len() * 3 / 2 + 1);
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *map.entry([a.min(b), a.max(b)]).or_insert(0) += 1;
            }
        }
        map
    }

    pub fn edge_stats(&self) -> EdgeStats {
        let map = self.edge_map();
        EdgeStats {
            edges: map.len(),
            boundary: map.values().filter(|&&c| c == 1).count(),
            nonmanifold: map.values().filter(|&&c| c > 2).count(),
        }
    }

    /// Sorted list of edges bounding exactly one triangle.
    pub fn boundary_edges(&self) -> Vec<[usize; 2]> {
        let mut out: Vec<_> = self.edge_map().into_iter().filter(|&(_, c)| c == 1).map(|(e, _)| e).collect();
        out.sort_unstable();
        out
    }

    /// Number of vertices referenced by at least one triangle.
    pub fn used_vertex_count(&self) -> usize {
        let mut used = vec![false; self.vertices.len()];
        for t in &self.triangles {
            for &i in t {
                used[i] = true;
            }
        }
        used.iter().filter(|&&u| u).count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.used_vertex_count() as i64 - self.edge_map().len() as i64 + self.triangles.len() as i64
    }

    /// Every edge bounds exactly two triangles.
    pub fn is_closed(&self) -> bool {
        !self.triangles.is_empty() && self.edge_map().values().all(|&c| c == 2)
    }

    /// First interior edge traversed in the same direction by both of its
    /// triangles, if any.
    pub fn orientation_conflict(&self) -> Option<(usize, usize)> {
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let e = (t[k], t[(k + 1) % 3]);
                let c = directed.entry(e).or_insert(0);
                *c += 1;
                if *c > 1 {
                    return Some(e);
                }
            }
        }
        None
    }

    pub fn bounding_box(&self) -> Option<(Vec3, Vec3)> {
        let first = *self.vertices.first()?;
        Some(self.vertices.iter().fold((first, first), |(lo, hi), p| (lo.inf(p), hi.sup(p))))
    }

    pub fn diagonal(&self) -> f64 {
        self.bounding_box().map_or(0.0, |(lo, hi)| (hi - lo).norm())
    }

    pub fn triangle_points(&self, t: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// `(1/6) Σ det(v₁, v₂, v₃)` without closedness checks.
    pub fn signed_volume_raw(&self) -> f64 {
        // centering keeps the sum translation-invariant in floating point
        let c = self.bounding_box().map_or(Vec3::zeros(), |(lo, hi)| 0.5 * (lo + hi));
        let mut sum = 0.0;
        let mut comp = 0.0;
        for t in 0..self.triangles.len() {
            let [a, b, d] = self.triangle_points(t);
            let term = (a - c).dot(&(b - c).cross(&(d - c))) / 6.0;
            let y = term - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
        }
        sum
    }

    pub fn translated(&self, offset: Vec3) -> Self {
        let mut m = self.clone();
        for p in &mut m.vertices {
            *p += offset;
        }
        m
    }

    pub fn flipped(&self) -> Self {
        let mut m = self.clone();
        for t in &mut m.triangles {
            t.swap(1, 2);
        }
        m
    }

    /// Axis-aligned cube `[0, side]³`, outward oriented.
    pub fn cube(side: f64) -> Self {
        let vertices = (0..8)
            .map(|i| Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64) * side)
            .collect();
        let triangles = vec![
            [0, 2, 1], [1, 2, 3], // z = 0
            [4, 5, 6], [5, 7, 6], // z = 1
            [0, 1, 4], [1, 5, 4], // y = 0
            [2, 6, 3], [3, 6, 7], // y = 1
            [0, 4, 2], [2, 4, 6], // x = 0
            [1, 3, 5], [3, 7, 5], // x = 1
        ];
        Self { vertices, triangles, seam_edges: Vec::new() }
    }
}

/// One sampled quarter before assembly. Vertex `k` of every reflected copy
/// corresponds to vertex `k` of the original.
#[derive(Debug, Clone)]
pub struct MeshPiece {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
    pub tags: Vec<u8>,
    pub n_s: usize,
    pub n_lower: usize,
    pub n_upper: usize,
}

impl MeshPiece {
    pub fn rows(&self) -> usize {
        self.n_lower + self.n_upper + 1
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.rows() + j
    }

    /// Index of the crease vertex of column `i`.
    pub fn crease_index(&self, i: usize) -> usize {
        self.index(i, self.n_lower)
    }

    pub fn to_mesh(&self) -> TriMesh {
        TriMesh { vertices: self.vertices.clone(), triangles: self.triangles.clone(), seam_edges: Vec::new() }
    }
}

/// Splits `n_v` intervals across `U` into `(lower, upper)` counts.
pub fn split_v_intervals(n_v: usize) -> (usize, usize) {
    let upper = n_v / 2;
    (n_v - upper, upper)
}

/// Samples a quarter on a grid that follows the curved bounds of `U`.
///
/// Columns are uniform in `s`; each column has `n_v/2` intervals on
/// `[0, ζ]` and the rest on `[ζ − b, 0]`, so `v = 0` is a grid row. The
/// end columns use `ζ = 0` exactly when `|ζ| ≤ τ_bc`.
pub fn sample_and_triangulate<Q: QuarterMap + ?Sized>(
    map: &Q,
    n_s: usize,
    n_v: usize,
    tol: &Tolerances,
) -> Result<MeshPiece> {
    if n_s < 2 {
        return Err(Error::GridTooCoarse { needed: 2, got: n_s });
    }
    if n_v < 2 {
        return Err(Error::GridTooCoarse { needed: 2, got: n_v });
    }
    let (n_lower, n_upper) = split_v_intervals(n_v);
    let data = map.data();
    let (length, b) = (data.length(), data.b());
    let rows = n_lower + n_upper + 1;

    let columns: Vec<Result<Vec<Vec3>>> = (0..=n_s)
        .into_par_iter()
        .map(|i| {
            let s = if i == n_s { length } else { length * i as f64 / n_s as f64 };
            let end = i == 0 || i == n_s;
            let mut zeta = data.zeta().value(s);
            let mut c = map.crease_point(s);
            if end && zeta.abs() <= tol.bc {
                zeta = 0.0;
                c.y = 0.0;
                c.z = 0.0;
            }
            let (up, low) = (map.upper_ruling(s), map.lower_ruling(s));
            let mut col = Vec::with_capacity(rows);
            for j in 0..rows {
                let p = if j < n_lower {
                    c + low * ((zeta - b) * (n_lower - j) as f64 / n_lower as f64)
                } else if j == n_lower {
                    c
                } else {
                    c + up * (zeta * (j - n_lower) as f64 / n_upper as f64)
                };
                if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                    return Err(Error::NonFiniteEvaluation { at: s });
                }
                col.push(p);
            }
            Ok(col)
        })
        .collect();

    let mut vertices = Vec::with_capacity((n_s + 1) * rows);
    let mut tags = Vec::with_capacity((n_s + 1) * rows);
    for (i, col) in columns.into_iter().enumerate() {
        vertices.extend(col?);
        for j in 0..rows {
            let mut tag = 0;
            if j == 0 {
                tag |= TAG_VERTICAL;
            }
            if j == rows - 1 {
                tag |= TAG_HORIZONTAL;
            }
            if j == n_lower {
                tag |= TAG_CREASE;
            }
            if i == 0 || i == n_s {
                tag |= TAG_END;
            }
            tags.push(tag);
        }
    }

    // Quads (i,j)…(i+1,j+1); winding (s,v) → (s,v+dv) → (s+ds,v). Diagonals
    // run toward the crease: (i,j)–(i+1,j+1) below it, (i+1,j)–(i,j+1) above.
    let idx = |i: usize, j: usize| i * rows + j;
    let mut triangles = Vec::with_capacity(2 * n_s * (rows - 1));
    for i in 0..n_s {
        for j in 0..rows - 1 {
            let (a, b_, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            // a diagonal between two tagged vertices could be duplicated by a mirror copy
            let pinned = |p: usize, q: usize| tags[p] != 0 && tags[q] != 0;
            let main = if j < n_lower { !pinned(a, c) || pinned(b_, d) } else { pinned(b_, d) && !pinned(a, c) };
            if main {
                triangles.push([a, c, b_]);
                triangles.push([a, d, c]);
            } else {
                triangles.push([a, d, b_]);
                triangles.push([b_, d, c]);
            }
        }
    }
    Ok(MeshPiece { vertices, triangles, tags, n_s, n_lower, n_upper })
}

/// `ρ_V(x, y, z) = (x, 2b − y, z)`.
pub fn reflect_vertical(p: Vec3, b: f64) -> Vec3 {
    Vec3::new(p.x, 2.0 * b - p.y, p.z)
}

/// `ρ_H(x, y, z) = (x, y, −z)`.
pub fn reflect_horizontal(p: Vec3) -> Vec3 {
    Vec3::new(p.x, p.y, -p.z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssemblyMode {
    /// Any open or non-manifold edge is a [`Error::WeldFailure`].
    RequireClosed,
    /// Openness is left for the topology report.
    Report,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Merges coincident vertices within `points[range]` using a uniform hash
/// grid of cell size `tol`.
fn weld_coincident(uf: &mut UnionFind, points: &[Vec3], offset: usize, tol: f64) {
    let key = |p: &Vec3| {
        [(p.x / tol).floor() as i64, (p.y / tol).floor() as i64, (p.z / tol).floor() as i64]
    };
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for (k, p) in points.iter().enumerate() {
        let [cx, cy, cz] = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(bucket) = grid.get(&[cx + dx, cy + dy, cz + dz]) {
                        for &o in bucket {
                            if (points[o] - p).norm() <= tol {
                                uf.union(offset + o, offset + k);
                            }
                        }
                    }
                }
            }
        }
        grid.entry([cx, cy, cz]).or_default().push(k);
    }
}

/// Assembles `P ∪ ρ_V(P) ∪ ρ_H(P) ∪ ρ_H ρ_V(P)`.
///
/// Vertices are welded within each copy by proximity, and across copies
/// only with their mirror partner (same grid index) on the mirror's fixed
/// boundary, and only when the two lie within `τ_weld · diag`. Coincident
/// interior sheets therefore stay distinct.
pub fn assemble_reflected(piece: &MeshPiece, b: f64, tol: &Tolerances, mode: AssemblyMode) -> Result<TriMesh> {
    let n = piece.vertices.len();
    let copies: [Vec<Vec3>; 4] = [
        piece.vertices.clone(),
        piece.vertices.iter().map(|&p| reflect_vertical(p, b)).collect(),
        piece.vertices.iter().map(|&p| reflect_horizontal(p)).collect(),
        piece.vertices.iter().map(|&p| reflect_horizontal(reflect_vertical(p, b))).collect(),
    ];
    let all: Vec<Vec3> = copies.iter().flatten().copied().collect();
    let diag = {
        let m = TriMesh { vertices: all.clone(), ..Default::default() };
        m.diagonal()
    };
    let weld_tol = tol.weld * diag;

    let mut uf = UnionFind::new(4 * n);
    for (c, pts) in copies.iter().enumerate() {
        weld_coincident(&mut uf, pts, c * n, weld_tol);
    }
    // (copy, copy, tags fixed by the reflection relating them)
    let pairs = [
        (0, 1, TAG_VERTICAL),
        (2, 3, TAG_VERTICAL),
        (0, 2, TAG_HORIZONTAL | TAG_END),
        (1, 3, TAG_HORIZONTAL | TAG_END),
    ];
    for &(p, q, mask) in &pairs {
        for k in 0..n {
            if piece.tags[k] & mask != 0 && (copies[p][k] - copies[q][k]).norm() <= weld_tol {
                uf.union(p * n + k, q * n + k);
            }
        }
    }

    // compact: representatives numbered in order of first use
    let mut new_index = vec![usize::MAX; 4 * n];
    let mut vertices = Vec::new();
    let mut triangles = Vec::with_capacity(4 * piece.triangles.len());
    let mut owner = Vec::with_capacity(4 * piece.triangles.len());
    for c in 0..4 {
        let flip = c == 1 || c == 2;
        for t in &piece.triangles {
            let mut tri = [0usize; 3];
            for (slot, &k) in tri.iter_mut().zip(t) {
                let r = uf.find(c * n + k);
                if new_index[r] == usize::MAX {
                    new_index[r] = vertices.len();
                    vertices.push(all[r]);
                }
                *slot = new_index[r];
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                continue;
            }
            if flip {
                tri.swap(1, 2);
            }
            triangles.push(tri);
            owner.push(c);
        }
    }

    let mut incident: HashMap<[usize; 2], Vec<usize>> = HashMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b_) = (t[k], t[(k + 1) % 3]);
            incident.entry([a.min(b_), a.max(b_)]).or_default().push(ti);
        }
    }
    let mut seam_edges: Vec<[usize; 2]> = incident
        .iter()
        .filter(|(_, ts)| ts.len() == 2 && owner[ts[0]] != owner[ts[1]])
        .map(|(e, _)| *e)
        .collect();
    seam_edges.sort_unstable();

    let mesh = TriMesh { vertices, triangles, seam_edges };
    if mode == AssemblyMode::RequireClosed {
        let stats = mesh.edge_stats();
        if stats.boundary > 0 || stats.nonmanifold > 0 {
            return Err(Error::WeldFailure(format!(
                "{} open and {} non-manifold edges after welding at {weld_tol:.3e}",
                stats.boundary, stats.nonmanifold
            )));
        }
    }
    Ok(mesh)
}
