//! Triangle–triangle intersection over a bounding-volume hierarchy.
//!
//! Pairs that share a vertex index are adjacent, and pairs lying in a
//! common plane are stacked sheets; neither counts. Touching counts.

use rayon::prelude::*;

use crate::kernel::Vec3;
use crate::mesh::TriMesh;

#[derive(Debug, Clone, Copy)]
struct Aabb {
    lo: Vec3,
    hi: Vec3,
}

impl Aabb {
    fn of(points: &[Vec3; 3], pad: f64) -> Self {
        let lo = points[0].inf(&points[1]).inf(&points[2]).add_scalar(-pad);
        let hi = points[0].sup(&points[1]).sup(&points[2]).add_scalar(pad);
        Self { lo, hi }
    }

    fn union(&self, o: &Aabb) -> Aabb {
        Aabb { lo: self.lo.inf(&o.lo), hi: self.hi.sup(&o.hi) }
    }

    fn overlaps(&self, o: &Aabb) -> bool {
        (0..3).all(|k| self.lo[k] <= o.hi[k] && o.lo[k] <= self.hi[k])
    }
}

enum Node {
    Leaf { bounds: Aabb, items: Vec<usize> },
    Inner { bounds: Aabb, left: Box<Node>, right: Box<Node> },
}

impl Node {
    fn bounds(&self) -> &Aabb {
        match self {
            Node::Leaf { bounds, .. } | Node::Inner { bounds, .. } => bounds,
        }
    }
}

const LEAF_SIZE: usize = 4;

fn build(items: &mut [usize], boxes: &[Aabb], centers: &[Vec3]) -> Node {
    let bounds = items.iter().skip(1).fold(boxes[items[0]], |b, &i| b.union(&boxes[i]));
    if items.len() <= LEAF_SIZE {
        return Node::Leaf { bounds, items: items.to_vec() };
    }
    let ext = bounds.hi - bounds.lo;
    let axis = if ext.x >= ext.y && ext.x >= ext.z { 0 } else if ext.y >= ext.z { 1 } else { 2 };
    let mid = items.len() / 2;
    items.select_nth_unstable_by(mid, |&a, &b| centers[a][axis].total_cmp(&centers[b][axis]).then(a.cmp(&b)));
    let (l, r) = items.split_at_mut(mid);
    Node::Inner { bounds, left: Box::new(build(l, boxes, centers)), right: Box::new(build(r, boxes, centers)) }
}

fn query(node: &Node, b: &Aabb, out: &mut Vec<usize>) {
    if !node.bounds().overlaps(b) {
        return;
    }
    match node {
        Node::Leaf { items, .. } => out.extend(items.iter().copied()),
        Node::Inner { left, right, .. } => {
            query(left, b, out);
            query(right, b, out);
        }
    }
}

/// Interval of `t = D·p` over the part of triangle `tri` on the plane with
/// signed vertex distances `d` (already snapped to zero within `eps`).
fn plane_section(tri: &[Vec3; 3], d: &[f64; 3], dir: &Vec3) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut push = |p: Vec3| {
        let t = dir.dot(&p);
        lo = lo.min(t);
        hi = hi.max(t);
    };
    for k in 0..3 {
        let (a, b) = (k, (k + 1) % 3);
        if d[a] == 0.0 {
            push(tri[a]);
        }
        if (d[a] > 0.0 && d[b] < 0.0) || (d[a] < 0.0 && d[b] > 0.0) {
            let w = d[a] / (d[a] - d[b]);
            push(tri[a] + (tri[b] - tri[a]) * w);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

fn distances(tri: &[Vec3; 3], n: &Vec3, origin: &Vec3, eps: f64) -> [f64; 3] {
    let mut d = [0.0; 3];
    for k in 0..3 {
        let v = n.dot(&(tri[k] - origin));
        d[k] = if v.abs() <= eps { 0.0 } else { v };
    }
    d
}

/// Whether two non-coplanar triangles meet, touching included. Coplanar
/// pairs (every vertex of each within `eps` of the other's plane) return
/// `false`.
pub fn triangles_intersect(t1: &[Vec3; 3], t2: &[Vec3; 3], eps: f64) -> bool {
    let n1 = (t1[1] - t1[0]).cross(&(t1[2] - t1[0]));
    let n2 = (t2[1] - t2[0]).cross(&(t2[2] - t2[0]));
    let (l1, l2) = (n1.norm(), n2.norm());
    if l1 == 0.0 || l2 == 0.0 {
        return false;
    }
    let (n1, n2) = (n1 / l1, n2 / l2);
    let d2 = distances(t2, &n1, &t1[0], eps);
    if d2.iter().all(|&v| v > 0.0) || d2.iter().all(|&v| v < 0.0) {
        return false;
    }
    let d1 = distances(t1, &n2, &t2[0], eps);
    if d1.iter().all(|&v| v > 0.0) || d1.iter().all(|&v| v < 0.0) {
        return false;
    }
    if d1.iter().all(|&v| v == 0.0) || d2.iter().all(|&v| v == 0.0) {
        return false;
    }
    let dir = n1.cross(&n2);
    let len = dir.norm();
    if len < 1e-12 {
        // parallel planes within eps but not coplanar per vertex: treat as stacked
        return false;
    }
    let dir = dir / len;
    match (plane_section(t1, &d1, &dir), plane_section(t2, &d2, &dir)) {
        (Some((a0, a1)), Some((b0, b1))) => a1 >= b0 - eps && b1 >= a0 - eps,
        _ => false,
    }
}

/// All intersecting triangle pairs `(i, j)`, `i < j`, sorted. `eps` is the
/// absolute contact tolerance.
pub fn intersecting_pairs(mesh: &TriMesh, eps: f64) -> Vec<(usize, usize)> {
    let n = mesh.triangles.len();
    if n < 2 {
        return Vec::new();
    }
    let tris: Vec<[Vec3; 3]> = (0..n).map(|t| mesh.triangle_points(t)).collect();
    let boxes: Vec<Aabb> = tris.iter().map(|t| Aabb::of(t, eps)).collect();
    let centers: Vec<Vec3> = tris.iter().map(|t| (t[0] + t[1] + t[2]) / 3.0).collect();
    let mut items: Vec<usize> = (0..n).collect();
    let root = build(&mut items, &boxes, &centers);

    let mut pairs: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut cand = Vec::new();
            query(&root, &boxes[i], &mut cand);
            let ti = mesh.triangles[i];
            let root_tris = &tris;
            cand.into_iter()
                .filter(move |&j| j > i)
                .filter(move |&j| {
                    let tj = mesh.triangles[j];
                    !ti.iter().any(|v| tj.contains(v)) && triangles_intersect(&root_tris[i], &root_tris[j], eps)
                })
                .map(move |j| (i, j))
                .collect::<Vec<_>>()
        })
        .collect();
    pairs.sort_unstable();
    pairs
}
