//! Numerical checks: isometry, flatness, crease planarity, topology and
//! enclosed volume.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::intersect::intersecting_pairs;
use crate::kernel::{measured_metric, Metric, Surface, Vec3};
use crate::mesh::TriMesh;
use crate::pillow::{QuarterMap, StripSide};

/// Metric step as a fraction of `L`.
pub const METRIC_STEP: f64 = 1e-5;
/// Curvature step as a fraction of `L`.
pub const CURVATURE_STEP: f64 = 1e-4;
/// `EG − F²` below this is degenerate.
pub const DET_MIN: f64 = 1e-12;
/// Triangles below `AREA_MIN · diag²` are degenerate.
pub const AREA_MIN: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub n_s: usize,
    pub n_v: usize,
}

impl Grid {
    pub fn new(n_s: usize, n_v: usize) -> Self {
        Self { n_s, n_v }
    }

    fn require(&self, min: usize) -> Result<()> {
        let got = self.n_s.min(self.n_v);
        if got < min {
            return Err(Error::GridTooCoarse { needed: min, got });
        }
        Ok(())
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n_s, self.n_v)
    }
}

impl std::str::FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("grid must look like NSxNV, got '{s}'"));
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        Ok(Grid { n_s: a.trim().parse().map_err(|_| bad())?, n_v: b.trim().parse().map_err(|_| bad())? })
    }
}

/// `{"check", "grid", "worst", "at", "threshold", "pass"}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub grid: String,
    pub worst: f64,
    pub at: [f64; 2],
    pub threshold: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, grid: impl Into<String>, worst: f64, at: [f64; 2], threshold: f64) -> Self {
        Self { check: check.into(), grid: grid.into(), worst, at, threshold, pass: worst < threshold }
    }
}

/// A rectangle-like parameter domain `s ∈ [s₀, s₁]`, `v ∈ bounds(s)`.
pub struct SampleDomain<'a> {
    pub s_range: (f64, f64),
    pub v_bounds: &'a (dyn Fn(f64) -> (f64, f64) + Sync),
}

impl SampleDomain<'_> {
    fn points(&self, grid: Grid) -> Vec<[f64; 2]> {
        let (s0, s1) = self.s_range;
        let mut out = Vec::with_capacity(grid.n_s * grid.n_v);
        for i in 0..grid.n_s {
            let s = s0 + (s1 - s0) * i as f64 / (grid.n_s - 1) as f64;
            let (lo, hi) = (self.v_bounds)(s);
            for j in 0..grid.n_v {
                out.push([s, lo + (hi - lo) * j as f64 / (grid.n_v - 1) as f64]);
            }
        }
        out
    }
}

/// Largest value and where, first occurrence on ties; NaN is worst.
fn worst_of(values: Vec<(f64, [f64; 2])>) -> (f64, [f64; 2]) {
    values.into_iter().fold((f64::NEG_INFINITY, [f64::NAN; 2]), |acc, (r, at)| {
        if r.is_nan() && !acc.0.is_nan() || r > acc.0 {
            (r, at)
        } else {
            acc
        }
    })
}

/// Central-difference metric against `reference`, worst componentwise
/// difference over an `n_s × n_v` grid spanning the domain.
pub fn check_isometry(
    name: &str,
    surface: &(dyn Surface + Sync),
    reference: &(dyn Fn(f64, f64) -> Metric + Sync),
    domain: &SampleDomain<'_>,
    grid: Grid,
    h: f64,
    threshold: f64,
) -> Result<CheckReport> {
    grid.require(3)?;
    let residuals = domain
        .points(grid)
        .into_par_iter()
        .map(|[s, v]| (measured_metric(surface, s, v, h).max_diff(&reference(s, v)), [s, v]))
        .collect();
    let (worst, at) = worst_of(residuals);
    Ok(CheckReport::new(name, grid.to_string(), worst, at, threshold))
}

/// Gaussian curvature `(LN − M²)/(EG − F²)` from central differences with
/// step `h`.
pub fn gaussian_curvature(surface: &(dyn Surface + Sync), s: f64, v: f64, h: f64) -> Result<f64> {
    let p = |ds: f64, dv: f64| surface.point(s + ds * h, v + dv * h);
    let c = p(0.0, 0.0);
    let xs = (p(1.0, 0.0) - p(-1.0, 0.0)) / (2.0 * h);
    let xv = (p(0.0, 1.0) - p(0.0, -1.0)) / (2.0 * h);
    let xss = (p(1.0, 0.0) - 2.0 * c + p(-1.0, 0.0)) / (h * h);
    let xvv = (p(0.0, 1.0) - 2.0 * c + p(0.0, -1.0)) / (h * h);
    let xsv = (p(1.0, 1.0) - p(1.0, -1.0) - p(-1.0, 1.0) + p(-1.0, -1.0)) / (4.0 * h * h);
    let m = Metric::new(xs.dot(&xs), xs.dot(&xv), xv.dot(&xv));
    let det = m.det();
    if !(det >= DET_MIN) {
        return Err(Error::DegenerateMetric { s, v, det });
    }
    let n = xs.cross(&xv) / det.sqrt();
    let (l, mm, nn) = (xss.dot(&n), xsv.dot(&n), xvv.dot(&n));
    Ok((l * nn - mm * mm) / det)
}

/// Worst `|K|` over the grid.
pub fn check_flatness(
    name: &str,
    surface: &(dyn Surface + Sync),
    domain: &SampleDomain<'_>,
    grid: Grid,
    h: f64,
    threshold: f64,
) -> Result<CheckReport> {
    grid.require(3)?;
    let values: Vec<(f64, [f64; 2])> = domain
        .points(grid)
        .into_par_iter()
        .map(|[s, v]| gaussian_curvature(surface, s, v, h).map(|k| (k.abs(), [s, v])))
        .collect::<Result<_>>()?;
    let (worst, at) = worst_of(values);
    Ok(CheckReport::new(name, grid.to_string(), worst, at, threshold))
}

fn strip_domain_range<Q: QuarterMap + ?Sized>(map: &Q, tol: &Tolerances) -> (f64, f64) {
    map.data().guarded_range(tol.eps_endpoint)
}

/// Isometry of one strip of a quarter against `(1, −ζ′(s), 1)`, on the
/// endpoint-guarded part of the strip.
pub fn check_strip_isometry<Q: QuarterMap>(map: &Q, side: StripSide, grid: Grid, tol: &Tolerances) -> Result<CheckReport> {
    let zeta = map.data().zeta();
    let bounds = |s: f64| side.v_range(map.v_bounds(s));
    let domain = SampleDomain { s_range: strip_domain_range(map, tol), v_bounds: &bounds };
    let reference = |s: f64, _v: f64| Metric::new(1.0, -zeta.d1(s), 1.0);
    let view = map.strip(side);
    let h = METRIC_STEP * map.data().length();
    check_isometry(&format!("isometry_{}", side_name(side)), &view, &reference, &domain, grid, h, tol.isometry)
}

pub fn check_strip_flatness<Q: QuarterMap>(map: &Q, side: StripSide, grid: Grid, tol: &Tolerances) -> Result<CheckReport> {
    let bounds = |s: f64| side.v_range(map.v_bounds(s));
    let domain = SampleDomain { s_range: strip_domain_range(map, tol), v_bounds: &bounds };
    let view = map.strip(side);
    let h = CURVATURE_STEP * map.data().length();
    check_flatness(&format!("flatness_{}", side_name(side)), &view, &domain, grid, h, tol.flatness)
}

pub fn side_name(side: StripSide) -> &'static str {
    match side {
        StripSide::Upper => "upper",
        StripSide::Lower => "lower",
    }
}

/// Best plane through the x-axis, `n_y y + n_z z = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarityReport {
    pub normal: [f64; 3],
    pub max_deviation: f64,
    /// `λ̂ = −n_y / n_z`, so the plane is `z = λ̂ y`.
    pub lambda: f64,
}

/// Fits the plane through the x-axis that minimizes the squared distances.
pub fn check_crease_planarity(samples: &[Vec3]) -> Result<PlanarityReport> {
    if samples.len() < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 crease samples, got {}", samples.len())));
    }
    let (mut syy, mut syz, mut szz) = (0.0, 0.0, 0.0);
    for p in samples {
        syy += p.y * p.y;
        syz += p.y * p.z;
        szz += p.z * p.z;
    }
    let scale = syy + szz;
    if !(scale > 0.0) || samples.iter().all(|p| p.y.hypot(p.z) <= 1e-15 * (1.0 + p.x.abs())) {
        return Err(Error::CollinearSamples);
    }
    // smallest eigenvector of [[syy, syz], [syz, szz]]
    let half_diff = 0.5 * (syy - szz);
    let root = half_diff.hypot(syz);
    let small = 0.5 * (syy + szz) - root;
    let (ny, nz) = if syz.abs() > 1e-300 {
        let v = (syz, small - syy);
        let l = v.0.hypot(v.1);
        (v.0 / l, v.1 / l)
    } else if syy <= szz {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    // orient so that n_z ≥ 0 (a plane z = λ y has normal (0, −λ, 1))
    let (ny, nz) = if nz < 0.0 || (nz == 0.0 && ny < 0.0) { (-ny, -nz) } else { (ny, nz) };
    let max_deviation = samples.iter().map(|p| (ny * p.y + nz * p.z).abs()).fold(0.0, f64::max);
    let lambda = if nz == 0.0 { f64::INFINITY } else { -ny / nz };
    Ok(PlanarityReport { normal: [0.0, ny, nz], max_deviation, lambda })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub closed: bool,
    pub boundary_edges: usize,
    pub nonmanifold_edges: usize,
    pub seam_edges: usize,
    pub intersections: usize,
    pub signed_volume: f64,
    /// Closed, consistently oriented and free of self-intersection.
    pub volume_valid: bool,
}

/// Counts, closedness, self-intersection and signed volume. The volume is
/// always reported; `volume_valid` says whether it means anything.
pub fn topology_report(mesh: &TriMesh, tol: &Tolerances) -> Result<TopologyReport> {
    let diag = mesh.diagonal();
    let min_area = AREA_MIN * diag * diag;
    for t in 0..mesh.triangles.len() {
        let area = mesh.triangle_area(t);
        if !(area >= min_area) {
            return Err(Error::DegenerateTriangle { index: t, area });
        }
    }
    let stats = mesh.edge_stats();
    let closed = mesh.is_closed();
    let intersections = intersecting_pairs(mesh, tol.contact * diag).len();
    let oriented = mesh.orientation_conflict().is_none();
    Ok(TopologyReport {
        vertices: mesh.used_vertex_count(),
        edges: stats.edges,
        faces: mesh.triangles.len(),
        euler: mesh.euler_characteristic(),
        closed,
        boundary_edges: stats.boundary,
        nonmanifold_edges: stats.nonmanifold,
        seam_edges: mesh.seam_edges.len(),
        intersections,
        signed_volume: mesh.signed_volume_raw(),
        volume_valid: closed && oriented && intersections == 0,
    })
}

/// `(1/6) Σ det(v₁, v₂, v₃)` of a closed, consistently oriented mesh.
pub fn enclosed_volume(mesh: &TriMesh) -> Result<f64> {
    let stats = mesh.edge_stats();
    if stats.boundary > 0 || stats.nonmanifold > 0 || mesh.triangles.is_empty() {
        return Err(Error::NotClosed { boundary_edges: stats.boundary });
    }
    if let Some((a, b)) = mesh.orientation_conflict() {
        return Err(Error::InconsistentOrientation(a, b));
    }
    Ok(mesh.signed_volume_raw())
}
