//! Development of a quarter onto the plane and the double rectangle.
//!
//! The crease pattern is `γ(s) = (∫₀ˢ √(1 − ζ′²), ζ(s), 0)`, and the
//! developing map `Y(s, v) = γ(s) + v (0, −1, 0)` carries `U` onto the
//! rectangle `[0, 2a] × [0, b]`.

use std::sync::Arc;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::kernel::{SpaceCurve, Vec3};
use crate::mesh::TriMesh;
use crate::pillow::{QuarterMap, CREASE_PANELS};
use crate::profile::{ConditionMargin, CubicSpline, FundamentalData, GraphFunction, ProfileFunction, ValidationReport};
use crate::quadrature::CumulativeIntegral;

/// `γ(s)`, an arc-length curve in the plane `z = 0`.
#[derive(Debug, Clone)]
pub struct CreasePatternCurve {
    zeta: ProfileFunction,
    x: CumulativeIntegral,
}

impl CreasePatternCurve {
    pub fn new(zeta: ProfileFunction, tol: f64) -> Result<Self> {
        let z = zeta.clone();
        let rho = Arc::new(move |s: f64| z.speed_factor(s, 1.0));
        let x = CumulativeIntegral::new(rho, 0.0, zeta.domain_end(), CREASE_PANELS, tol)?;
        Ok(Self { zeta, x })
    }

    fn rho(&self, s: f64) -> f64 {
        self.zeta.speed_factor(s, 1.0)
    }

    /// Parameter `s` at which `γ` reaches abscissa `x`.
    pub fn s_at(&self, x: f64) -> Result<f64> {
        self.x.invert(x)
    }

    /// `2a = ∫₀ᴸ √(1 − ζ′²)`.
    pub fn width(&self) -> f64 {
        self.x.total()
    }
}

impl SpaceCurve for CreasePatternCurve {
    fn domain(&self) -> (f64, f64) {
        (0.0, self.zeta.domain_end())
    }

    fn position(&self, s: f64) -> Vec3 {
        Vec3::new(self.x.eval(s), self.zeta.value(s), 0.0)
    }

    fn d1(&self, s: f64) -> Vec3 {
        Vec3::new(self.rho(s), self.zeta.d1(s), 0.0)
    }

    fn d2(&self, s: f64) -> Vec3 {
        let [_, dz, ddz] = self.zeta.jet(s);
        Vec3::new(-dz * ddz / self.rho(s), ddz, 0.0)
    }

    fn d3(&self, s: f64) -> Option<Vec3> {
        let [_, dz, ddz] = self.zeta.jet(s);
        let dddz = self.zeta.d3(s)?;
        let r = self.rho(s);
        Some(Vec3::new(-(ddz * ddz + dz * dddz) / r - dz * dz * ddz * ddz / (r * r * r), dddz, 0.0))
    }
}

/// The crease pattern of a pillow box together with its rectangle.
#[derive(Debug, Clone)]
pub struct CreasePattern {
    data: FundamentalData,
    curve: Arc<CreasePatternCurve>,
}

impl CreasePattern {
    pub fn new(data: &FundamentalData, tol: &Tolerances) -> Result<Self> {
        let curve = Arc::new(CreasePatternCurve::new(data.zeta().clone(), tol.quad)?);
        Ok(Self { data: data.clone(), curve })
    }

    pub fn data(&self) -> &FundamentalData {
        &self.data
    }

    pub fn curve(&self) -> &Arc<CreasePatternCurve> {
        &self.curve
    }

    pub fn gamma(&self, s: f64) -> Vec3 {
        self.curve.position(s)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.curve.width()
    }

    /// `dψ/dx = ζ′/√(1 − ζ′²)` at parameter `s`.
    pub fn slope(&self, s: f64) -> f64 {
        let dz = self.data.zeta().d1(s);
        dz / (1.0 - dz * dz).sqrt()
    }

    /// The pattern as a graph `ψ` over `[0, 2a]`.
    pub fn graph(&self) -> PatternGraph {
        PatternGraph { curve: self.curve.clone() }
    }

    /// `(x, ψ(x))` at `n + 1` uniform parameters, endpoints exact.
    pub fn polyline(&self, n: usize) -> Vec<[f64; 2]> {
        let len = self.data.length();
        (0..=n)
            .map(|i| {
                let s = len * i as f64 / n as f64;
                match i {
                    0 => [0.0, 0.0],
                    _ if i == n => [self.curve.width(), 0.0],
                    _ => {
                        let p = self.gamma(s);
                        [p.x, p.y]
                    }
                }
            })
            .collect()
    }
}

/// `ψ(x) = ζ(s(x))` with `ψ′ = ζ′/ρ`, `ψ″ = ζ″/ρ⁴`, `ρ = √(1 − ζ′²)`.
#[derive(Debug, Clone)]
pub struct PatternGraph {
    curve: Arc<CreasePatternCurve>,
}

impl GraphFunction for PatternGraph {
    fn domain_end(&self) -> f64 {
        self.curve.width()
    }

    fn jet(&self, x: f64) -> [f64; 3] {
        let s = match self.curve.s_at(x) {
            Ok(s) => s,
            Err(_) => return [f64::NAN; 3],
        };
        let [z, dz, ddz] = self.curve.zeta.jet(s);
        let r = self.curve.rho(s);
        [z, dz / r, ddz / (r * r * r * r)]
    }
}

/// `Y(s, v) = γ(s) + v (0, −1, 0)` on `U`.
#[derive(Debug, Clone)]
pub struct DevelopingMap {
    pattern: CreasePattern,
}

impl DevelopingMap {
    pub fn pattern(&self) -> &CreasePattern {
        &self.pattern
    }
}

const DOWN: Vec3 = Vec3::new(0.0, -1.0, 0.0);

impl QuarterMap for DevelopingMap {
    fn data(&self) -> &FundamentalData {
        &self.pattern.data
    }

    fn crease_point(&self, s: f64) -> Vec3 {
        self.pattern.gamma(s)
    }

    fn upper_ruling(&self, _s: f64) -> Vec3 {
        DOWN
    }

    fn lower_ruling(&self, _s: f64) -> Vec3 {
        DOWN
    }
}

pub fn developing_map(data: &FundamentalData) -> Result<DevelopingMap> {
    developing_map_with(data, &Tolerances::default())
}

pub fn developing_map_with(data: &FundamentalData, tol: &Tolerances) -> Result<DevelopingMap> {
    Ok(DevelopingMap { pattern: CreasePattern::new(data, tol)? })
}

/// Checks the crease-pattern conditions for a graph `ψ` on `[0, d]` on the
/// interior grid `xᵢ = d·i/(n+1)`:
///
/// * `graph`: `ψ(0) = ψ(d) = 0`;
/// * `slope`: `|ψ′| < 1`;
/// * `curvature`: `ψ″` of one sign and nonvanishing;
/// * `inside`: `0 < ψ < b`, so `γ₁` stays in the half rectangle and misses
///   its mirror image `γ₂`.
pub fn validate_pattern_conditions(
    psi: &dyn GraphFunction,
    b: f64,
    n_samples: usize,
    tol: &Tolerances,
) -> Result<ValidationReport> {
    if n_samples < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 samples, got {n_samples}")));
    }
    let d = psi.domain_end();
    if !(d > 0.0) {
        return Err(Error::DomainError(format!("graph domain [0, {d}] is empty")));
    }
    let jets: Vec<(f64, [f64; 3])> = (1..=n_samples)
        .map(|i| {
            let x = d * i as f64 / (n_samples + 1) as f64;
            (x, psi.jet(x))
        })
        .collect();
    if let Some((x, _)) = jets.iter().find(|(_, j)| j.iter().any(|v| !v.is_finite())) {
        return Err(Error::NonFiniteEvaluation { at: *x });
    }
    let worst = |f: &dyn Fn(&[f64; 3]) -> f64| {
        jets.iter().map(|(x, j)| (f(j), *x)).fold((f64::INFINITY, f64::NAN), |a, m| if m.0 < a.0 { m } else { a })
    };
    let (e0, ed) = (psi.jet(0.0)[0].abs(), psi.jet(d)[0].abs());
    let graph = if e0 >= ed { (tol.bc - e0, 0.0) } else { (tol.bc - ed, d) };
    let slope = worst(&|j| 1.0 - j[1].abs());
    let concave = worst(&|j| -j[2]);
    let convex = worst(&|j| j[2]);
    let curvature = if concave.0 >= convex.0 { concave } else { convex };
    let inside = worst(&|j| j[0].min(b - j[0]));

    let conditions = vec![
        ConditionMargin::new("graph", graph.0, graph.1),
        ConditionMargin::new("slope", slope.0, slope.1),
        ConditionMargin::new("curvature", curvature.0, curvature.1),
        ConditionMargin::new("inside", inside.0, inside.1),
    ];
    let pass = conditions.iter().all(|c| c.pass);
    Ok(ValidationReport { conditions, endpoint_margins: Vec::new(), pass })
}

/// A sampled pattern interpolated by a natural cubic spline, shifted so it
/// starts at `x = 0`.
#[derive(Debug, Clone)]
pub struct PolylineGraph {
    spline: CubicSpline,
    x0: f64,
    d: f64,
}

impl PolylineGraph {
    pub fn new(points: &[[f64; 2]]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidInput("a pattern polyline needs at least 3 points".into()));
        }
        if let Some(w) = points.windows(2).find(|w| !(w[1][0] > w[0][0])) {
            return Err(Error::NonGraph(format!("x does not increase from {} to {}", w[0][0], w[1][0])));
        }
        let x0 = points[0][0];
        let xs = points.iter().map(|p| p[0] - x0).collect::<Vec<_>>();
        let d = *xs.last().unwrap();
        let spline = CubicSpline::new(xs, points.iter().map(|p| p[1]).collect(), None)?;
        Ok(Self { spline, x0, d })
    }

    pub fn origin(&self) -> f64 {
        self.x0
    }
}

impl GraphFunction for PolylineGraph {
    fn domain_end(&self) -> f64 {
        self.d
    }

    fn jet(&self, x: f64) -> [f64; 3] {
        self.spline.jet(x)
    }
}

/// Validates a sampled pattern; [`Error::NonGraph`] unless `x` strictly
/// increases.
pub fn validate_pattern_polyline(
    points: &[[f64; 2]],
    b: f64,
    n_samples: usize,
    tol: &Tolerances,
) -> Result<ValidationReport> {
    validate_pattern_conditions(&PolylineGraph::new(points)?, b, n_samples, tol)
}

/// The double rectangle `[0, 2a] × [0, 2b]` in `z = 0`: two `n × n` sheets
/// sharing their `4n` boundary vertices. The front sheet faces `+z`.
pub fn double_rectangle_mesh(data: &FundamentalData, n: usize) -> Result<TriMesh> {
    if n < 2 {
        return Err(Error::GridTooCoarse { needed: 2, got: n });
    }
    let (w, h) = (2.0 * data.half_width(), 2.0 * data.b());
    let coord = |i: usize, j: usize| {
        let x = if i == n { w } else { w * i as f64 / n as f64 };
        let y = if j == n { h } else { h * j as f64 / n as f64 };
        Vec3::new(x, y, 0.0)
    };
    let on_boundary = |i: usize, j: usize| i == 0 || j == 0 || i == n || j == n;

    let mut vertices = Vec::with_capacity(2 * (n + 1) * (n + 1));
    let mut front = vec![0usize; (n + 1) * (n + 1)];
    let mut back = vec![0usize; (n + 1) * (n + 1)];
    for i in 0..=n {
        for j in 0..=n {
            front[i * (n + 1) + j] = vertices.len();
            vertices.push(coord(i, j));
        }
    }
    for i in 0..=n {
        for j in 0..=n {
            let k = i * (n + 1) + j;
            back[k] = if on_boundary(i, j) {
                front[k]
            } else {
                vertices.push(coord(i, j));
                vertices.len() - 1
            };
        }
    }
    let mut triangles = Vec::with_capacity(4 * n * n);
    for (sheet, flip) in [(&front, false), (&back, true)] {
        for i in 0..n {
            for j in 0..n {
                let at = |di: usize, dj: usize| sheet[(i + di) * (n + 1) + j + dj];
                // diagonals point toward the centre so no diagonal joins two boundary vertices
                let quad = if (2 * i < n) == (2 * j < n) {
                    [[at(0, 0), at(1, 0), at(1, 1)], [at(0, 0), at(1, 1), at(0, 1)]]
                } else {
                    [[at(0, 0), at(1, 0), at(0, 1)], [at(1, 0), at(1, 1), at(0, 1)]]
                };
                for mut t in quad {
                    if flip {
                        t.swap(1, 2);
                    }
                    triangles.push(t);
                }
            }
        }
    }
    TriMesh::new(vertices, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::measured_metric;
    use crate::pillow::StripSide;
    use crate::profile::PolynomialGraph;
    use crate::quadrature::adaptive_simpson;

    fn example() -> FundamentalData {
        FundamentalData::example()
    }

    #[test]
    fn half_width_closed_form() {
        let y = developing_map(&example()).unwrap();
        let two_a = 2.0 * (1.0 + 2f64.sqrt()).ln();
        assert!((2.0 * y.pattern().half_width() - two_a).abs() < 1e-10);
        assert!((example().half_width() - 0.5 * two_a).abs() < 1e-10);
    }

    #[test]
    fn flat_profile_limit() {
        let eps = 1e-3;
        let data = FundamentalData::new(1.0, ProfileFunction::polynomial(2.0, vec![0.0, eps, -eps / 2.0]).unwrap())
            .unwrap();
        assert!((data.half_width() - 1.0).abs() < eps * eps);
    }

    #[test]
    fn crease_maps_to_pattern() {
        let y = developing_map(&example()).unwrap();
        for &s in &[0.0, 0.3, 1.0, 2.0] {
            assert_eq!(y.point(s, 0.0), y.pattern().gamma(s));
            assert_eq!(y.point(s, 0.0).z, 0.0);
        }
    }

    #[test]
    fn developing_map_metric_and_image() {
        let data = example();
        let y = developing_map(&data).unwrap();
        let two_a = 2.0 * data.half_width();
        for side in StripSide::BOTH {
            let view = y.strip(side);
            for &s in &[0.002, 0.5, 1.0, 1.6, 1.998] {
                let (lo, hi) = side.v_range(y.v_bounds(s));
                for k in 0..=3 {
                    let v = lo + (hi - lo) * k as f64 / 3.0;
                    let m = measured_metric(&view, s, v, 1e-5);
                    assert!((m.e - 1.0).abs() < 1e-8 && (m.f + data.zeta().d1(s)).abs() < 1e-8);
                    assert!((m.g - 1.0).abs() < 1e-9);
                    let p = y.point(s, v);
                    assert!(p.x >= -1e-12 && p.x <= two_a + 1e-12 && p.y >= -1e-12 && p.y <= 1.0 + 1e-12);
                }
            }
        }
        let corner = y.point(2.0, y.v_bounds(2.0).0);
        assert!((corner - Vec3::new(two_a, 1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn pattern_has_unit_speed_and_slope_below_one() {
        let p = CreasePattern::new(&example(), &Tolerances::default()).unwrap();
        for i in 1..40 {
            let s = 2.0 * i as f64 / 40.0;
            let h = 1e-5;
            let d = (p.gamma(s + h) - p.gamma(s - h)) / (2.0 * h);
            assert!((d.norm() - 1.0).abs() < 1e-8);
            assert!(p.slope(s).abs() < 1.0);
        }
    }

    #[test]
    fn pattern_graph_derivatives_match_differences() {
        let g = CreasePattern::new(&example(), &Tolerances::default()).unwrap().graph();
        let h = 1e-4;
        for &x in &[0.2, 0.881, 1.5] {
            let [f, df, ddf] = g.jet(x);
            let (fp, fm) = (g.jet(x + h)[0], g.jet(x - h)[0]);
            assert!(((fp - fm) / (2.0 * h) - df).abs() < 1e-7);
            assert!(((fp - 2.0 * f + fm) / (h * h) - ddf).abs() < 1e-5);
        }
    }

    #[test]
    fn example_pattern_passes_all_conditions() {
        let data = example();
        let g = CreasePattern::new(&data, &Tolerances::default()).unwrap().graph();
        let r = validate_pattern_conditions(&g, data.b(), 64, &Tolerances::default()).unwrap();
        assert!(r.pass, "{r:?}");
        // inside: min over the grid of min(ψ, b − ψ); the grid minimum sits next to an end
        let d = g.domain_end();
        let oracle = (1..=64)
            .map(|i| {
                let psi = g.jet(d * i as f64 / 65.0)[0];
                psi.min(1.0 - psi)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((r.condition("inside").unwrap().margin - oracle).abs() < 1e-15);
    }

    #[test]
    fn steep_pattern_fails_slope() {
        // ψ = 1.2 x (1 − x) has |ψ′(0)| = 1.2
        let g = PolynomialGraph { d: 1.0, coeffs: vec![0.0, 1.2, -1.2] };
        let r = validate_pattern_conditions(&g, 1.0, 50, &Tolerances::default()).unwrap();
        assert!(!r.condition("slope").unwrap().pass);
        assert!(r.condition("inside").unwrap().pass);
    }

    #[test]
    fn touching_b_fails_inside_with_zero_margin() {
        // ψ = x(2 − x)/4 on [0, 2], peak 1/4 = b at x = 1 (sample 1 is exactly on the grid)
        let g = PolynomialGraph { d: 2.0, coeffs: vec![0.0, 0.5, -0.25] };
        let r = validate_pattern_conditions(&g, 0.25, 9, &Tolerances::default()).unwrap();
        let c = r.condition("inside").unwrap();
        assert!(!c.pass);
        assert_eq!(c.margin, 0.0);
        assert_eq!(c.at, 1.0);
    }

    #[test]
    fn polyline_must_be_a_graph() {
        let pts = [[0.0, 0.0], [1.0, 0.5], [0.9, 0.4], [2.0, 0.0]];
        assert!(matches!(
            validate_pattern_polyline(&pts, 1.0, 10, &Tolerances::default()),
            Err(Error::NonGraph(_))
        ));
        let p = CreasePattern::new(&example(), &Tolerances::default()).unwrap();
        let r = validate_pattern_polyline(&p.polyline(200), 1.0, 50, &Tolerances::default()).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn double_rectangle_counts() {
        for n in [2, 3, 16] {
            let m = double_rectangle_mesh(&example(), n).unwrap();
            assert_eq!(m.vertices.len(), 2 * (n + 1) * (n + 1) - 4 * n);
            assert!(m.is_closed());
            assert_eq!(m.euler_characteristic(), 2);
            assert!(m.orientation_conflict().is_none());
            assert_eq!(m.signed_volume_raw(), 0.0);
        }
        assert!(double_rectangle_mesh(&example(), 1).is_err());
    }

    #[test]
    fn square_double_rectangle() {
        // a = b: choose b equal to the Example half-width
        let a = example().half_width();
        let data = FundamentalData::new(a, ProfileFunction::hyperbolic(2.0, 1.0).unwrap()).unwrap();
        let m = double_rectangle_mesh(&data, 6).unwrap();
        let (lo, hi) = m.bounding_box().unwrap();
        assert!(((hi - lo).x - (hi - lo).y).abs() < 1e-12);
        assert!(m.is_closed() && m.euler_characteristic() == 2 && m.signed_volume_raw() == 0.0);
    }

    #[test]
    fn developed_area_equals_surface_area() {
        let data = example();
        let q = crate::pillow::quarter_parametrization(&data).unwrap();
        let (s0, s1) = data.guarded_range(Tolerances::default().eps_endpoint);
        // ∫∫ √(EG − F²) over the guarded part of U from finite-difference metrics of the
        // embedded quarter, against the planar area of its developed image
        let jac = |side: StripSide, s: f64, v: f64| measured_metric(&q.strip(side), s, v, 1e-5).det().max(0.0).sqrt();
        let surface = adaptive_simpson(
            &|s: f64| {
                StripSide::BOTH
                    .iter()
                    .map(|&side| {
                        let (a, b) = side.v_range(q.v_bounds(s));
                        (b - a) / 6.0 * (jac(side, s, a) + 4.0 * jac(side, s, 0.5 * (a + b)) + jac(side, s, b))
                    })
                    .sum::<f64>()
            },
            s0,
            s1,
            1e-10,
        )
        .unwrap();
        let y = developing_map(&data).unwrap();
        let developed = (y.crease_point(s1).x - y.crease_point(s0).x) * data.b();
        assert!((surface - developed).abs() / developed < 1e-6, "{surface} vs {developed}");
    }
}
