//! Height profiles `ζ(s)` of pillow-box creases, the fundamental data
//! `(b, ζ)`, and conversion of graph curves into arc-length profiles.
//!
//! A profile is always parametrized by the arc length of the crease it
//! describes, so `ζ′` is a slope along the crease, not along the x-axis.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, CumulativeIntegral, DEFAULT_TOL};

const REPARAM_PANELS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    BuiltinHyperbolic,
    BuiltinCircularArc,
    Polynomial,
    TabulatedSpline,
    /// Produced by graph or plane-curve conversion.
    Reparametrized,
}

/// `ζ(s)` together with its derivatives on `[0, L]`.
#[derive(Clone)]
pub struct ProfileFunction {
    length: f64,
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    /// `√(c² + r²) − √((s − c)² + r²)`, `c = L/2`.
    Hyperbolic { r: f64 },
    /// `R cos((s − c)/R) − R cos(c/R)`, `c = L/2`.
    Circular { radius: f64 },
    Polynomial { coeffs: Vec<f64> },
    Spline(Arc<CubicSpline>),
    Reparam(Arc<Reparam>),
}

impl fmt::Debug for ProfileFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProfileFunction")
            .field("kind", &self.kind())
            .field("length", &self.length)
            .finish()
    }
}

impl ProfileFunction {
    /// The hyperbolic profile `√(c² + r²) − √((s − c)² + r²)` on `[0, L]`.
    /// With `L = 2`, `r = 1` this is `√2 − √((s − 1)² + 1)`.
    pub fn hyperbolic(length: f64, r: f64) -> Result<Self> {
        check_length(length)?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidInput(format!("hyperbolic profile needs r > 0, got {r}")));
        }
        Ok(Self { length, repr: Repr::Hyperbolic { r } })
    }

    pub fn circular_arc(length: f64, radius: f64) -> Result<Self> {
        check_length(length)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("circular profile needs radius > 0, got {radius}")));
        }
        Ok(Self { length, repr: Repr::Circular { radius } })
    }

    /// `Σ cₖ sᵏ` on `[0, L]`.
    pub fn polynomial(length: f64, coeffs: Vec<f64>) -> Result<Self> {
        check_length(length)?;
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("polynomial needs finite coefficients".into()));
        }
        Ok(Self { length, repr: Repr::Polynomial { coeffs } })
    }

    /// Cubic spline through `(s[i], zeta[i])`. Natural end conditions unless
    /// end slopes are given.
    pub fn table(s: Vec<f64>, zeta: Vec<f64>, end_slopes: Option<(f64, f64)>) -> Result<Self> {
        let spline = CubicSpline::new(s, zeta, end_slopes)?;
        if spline.x[0] != 0.0 {
            return Err(Error::InvalidInput("table profile must start at s = 0".into()));
        }
        let length = *spline.x.last().unwrap();
        check_length(length)?;
        Ok(Self { length, repr: Repr::Spline(Arc::new(spline)) })
    }

    pub fn kind(&self) -> ProfileKind {
        match self.repr {
            Repr::Hyperbolic { .. } => ProfileKind::BuiltinHyperbolic,
            Repr::Circular { .. } => ProfileKind::BuiltinCircularArc,
            Repr::Polynomial { .. } => ProfileKind::Polynomial,
            Repr::Spline(_) => ProfileKind::TabulatedSpline,
            Repr::Reparam(_) => ProfileKind::Reparametrized,
        }
    }

    /// Crease length `L`.
    pub fn domain_end(&self) -> f64 {
        self.length
    }

    /// `[ζ(s), ζ′(s), ζ″(s)]`.
    pub fn jet(&self, s: f64) -> [f64; 3] {
        match &self.repr {
            Repr::Hyperbolic { r } => {
                let c = 0.5 * self.length;
                let u = s - c;
                let q = (u * u + r * r).sqrt();
                [(c * c + r * r).sqrt() - q, -u / q, -r * r / (q * q * q)]
            }
            Repr::Circular { radius } => {
                let c = 0.5 * self.length;
                let th = (s - c) / radius;
                [
                    radius * th.cos() - radius * (c / radius).cos(),
                    -th.sin(),
                    -th.cos() / radius,
                ]
            }
            Repr::Polynomial { coeffs } => poly_jet(coeffs, s),
            Repr::Spline(sp) => sp.jet(s),
            Repr::Reparam(rp) => rp.jet(s),
        }
    }

    /// Evaluates the derivative of the given order (0, 1 or 2).
    pub fn eval(&self, s: f64, order: usize) -> f64 {
        assert!(order <= 2, "profiles expose derivatives up to order 2");
        self.jet(s)[order]
    }

    pub fn value(&self, s: f64) -> f64 {
        self.jet(s)[0]
    }

    pub fn d1(&self, s: f64) -> f64 {
        self.jet(s)[1]
    }

    pub fn d2(&self, s: f64) -> f64 {
        self.jet(s)[2]
    }

    /// Third derivative where the representation provides it analytically.
    pub fn d3(&self, s: f64) -> Option<f64> {
        match &self.repr {
            Repr::Hyperbolic { r } => {
                let u = s - 0.5 * self.length;
                let q2 = u * u + r * r;
                Some(3.0 * r * r * u / (q2 * q2 * q2.sqrt()))
            }
            Repr::Circular { radius } => {
                let th = (s - 0.5 * self.length) / radius;
                Some(th.sin() / (radius * radius))
            }
            Repr::Polynomial { coeffs } => {
                let d3: Vec<f64> = coeffs
                    .iter()
                    .enumerate()
                    .skip(3)
                    .map(|(k, c)| c * (k * (k - 1) * (k - 2)) as f64)
                    .collect();
                Some(d3.iter().rev().fold(0.0, |acc, c| acc * s + c))
            }
            Repr::Spline(sp) => Some(sp.third(s)),
            Repr::Reparam(_) => None,
        }
    }

    /// Speed factor `√(1 − k ζ′²)` with tiny negative round-off clamped to 0.
    pub fn speed_factor(&self, s: f64, k: f64) -> f64 {
        sqrt_clamped(1.0 - k * self.d1(s).powi(2))
    }

    pub fn descriptor(&self) -> Option<ProfileDescriptor> {
        let shape = match &self.repr {
            Repr::Hyperbolic { r } => ProfileShape::Hyperbolic { r: *r },
            Repr::Circular { radius } => ProfileShape::Circular { radius: *radius },
            Repr::Polynomial { coeffs } => ProfileShape::Poly { coeffs: coeffs.clone() },
            Repr::Spline(sp) => ProfileShape::Table {
                s: sp.x.clone(),
                zeta: sp.y.clone(),
                end_slopes: sp.end_slopes.map(|(a, b)| [a, b]),
            },
            Repr::Reparam(_) => return None,
        };
        Some(ProfileDescriptor { shape, length: self.length })
    }
}

/// `√x`, treating round-off negatives down to `−1e-12` as zero.
pub(crate) fn sqrt_clamped(x: f64) -> f64 {
    if x < 0.0 && x > -1e-12 {
        0.0
    } else {
        x.sqrt()
    }
}

fn check_length(length: f64) -> Result<()> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::DomainError(format!("profile length must be positive, got {length}")));
    }
    Ok(())
}

fn poly_jet(coeffs: &[f64], s: f64) -> [f64; 3] {
    let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
    for &c in coeffs.iter().rev() {
        ddp = ddp * s + 2.0 * dp;
        dp = dp * s + p;
        p = p * s + c;
    }
    [p, dp, ddp]
}

/// C² cubic interpolant on strictly increasing knots.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
    end_slopes: Option<(f64, f64)>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>, end_slopes: Option<(f64, f64)>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::InvalidInput("spline needs at least 3 matching samples".into()));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("spline samples must be finite".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("spline knots must be strictly increasing".into()));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

        // tridiagonal system for second derivatives m
        let mut sub = vec![0.0; n];
        let mut diag = vec![1.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            sub[i] = h[i - 1];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            sup[i] = h[i];
            rhs[i] = 6.0 * (slope[i] - slope[i - 1]);
        }
        if let Some((p0, pn)) = end_slopes {
            diag[0] = 2.0 * h[0];
            sup[0] = h[0];
            rhs[0] = 6.0 * (slope[0] - p0);
            sub[n - 1] = h[n - 2];
            diag[n - 1] = 2.0 * h[n - 2];
            rhs[n - 1] = 6.0 * (pn - slope[n - 2]);
        }
        for i in 1..n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        }
        Ok(Self { x, y, m, end_slopes })
    }

    fn interval(&self, t: f64) -> usize {
        let p = self.x.partition_point(|&v| v <= t);
        p.saturating_sub(1).min(self.x.len() - 2)
    }

    pub fn jet(&self, t: f64) -> [f64; 3] {
        let i = self.interval(t);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let (a, b) = (x1 - t, t - x0);
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let c0 = self.y[i] / h - m0 * h / 6.0;
        let c1 = self.y[i + 1] / h - m1 * h / 6.0;
        [
            m0 * a * a * a / (6.0 * h) + m1 * b * b * b / (6.0 * h) + c0 * a + c1 * b,
            -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - c0 + c1,
            (m0 * a + m1 * b) / h,
        ]
    }

    pub fn third(&self, t: f64) -> f64 {
        let i = self.interval(t);
        (self.m[i + 1] - self.m[i]) / (self.x[i + 1] - self.x[i])
    }
}

// ---------------------------------------------------------------------------
// Graph and plane-curve conversion

/// How arc length is measured when turning a graph into a crease profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcMetric {
    /// The crease `(x, f(x), f(x))` of a pillow box: `ds = √(1 + 2f′²) dx`.
    SpaceCrease,
    /// A planar crease pattern `(x, ψ(x))`: `ds = √(1 + ψ′²) dx`.
    PlaneCrease,
}

impl ArcMetric {
    fn weight(self) -> f64 {
        match self {
            ArcMetric::SpaceCrease => 2.0,
            ArcMetric::PlaneCrease => 1.0,
        }
    }
}

/// A scalar graph `x ↦ f(x)` on `[0, d]`.
pub trait GraphFunction: Send + Sync {
    fn domain_end(&self) -> f64;
    /// `[f, f′, f″]` at `x`.
    fn jet(&self, x: f64) -> [f64; 3];
}

/// A plane curve `u ↦ (X(u), Y(u))` whose height `Y` becomes the profile.
pub trait PlaneCurve: Send + Sync {
    fn domain(&self) -> (f64, f64);
    /// `[(X, Y), (X′, Y′), (X″, Y″)]` at `u`.
    fn jet(&self, u: f64) -> [[f64; 2]; 3];
}

#[derive(Debug, Clone)]
pub struct PolynomialGraph {
    pub d: f64,
    pub coeffs: Vec<f64>,
}

impl GraphFunction for PolynomialGraph {
    fn domain_end(&self) -> f64 {
        self.d
    }

    fn jet(&self, x: f64) -> [f64; 3] {
        poly_jet(&self.coeffs, x)
    }
}

struct GraphAsCurve(Arc<dyn GraphFunction>);

impl PlaneCurve for GraphAsCurve {
    fn domain(&self) -> (f64, f64) {
        (0.0, self.0.domain_end())
    }

    fn jet(&self, u: f64) -> [[f64; 2]; 3] {
        let [f, df, ddf] = self.0.jet(u);
        [[u, f], [1.0, df], [0.0, ddf]]
    }
}

struct Reparam {
    curve: Arc<dyn PlaneCurve>,
    metric: ArcMetric,
    arclength: CumulativeIntegral,
}

impl Reparam {
    fn jet(&self, s: f64) -> [f64; 3] {
        let u = match self.arclength.invert(s) {
            Ok(u) => u,
            Err(_) => return [f64::NAN; 3],
        };
        let k = self.metric.weight();
        let [[_, y], [dx, dy], [ddx, ddy]] = self.curve.jet(u);
        let w = (dx * dx + k * dy * dy).sqrt();
        let dw = (dx * ddx + k * dy * ddy) / w;
        [y, dy / w, (ddy * w - dy * dw) / (w * w * w)]
    }
}

/// Reparametrizes the height of a plane curve by the arc length of the
/// crease it describes. Returns `(L, ζ)`.
pub fn plane_curve_to_arclength_profile(
    curve: Arc<dyn PlaneCurve>,
    metric: ArcMetric,
) -> Result<(f64, ProfileFunction)> {
    let (u0, u1) = curve.domain();
    if !(u1 > u0) {
        return Err(Error::DomainError(format!("empty curve domain [{u0}, {u1}]")));
    }
    let k = metric.weight();
    let c = Arc::clone(&curve);
    let speed = Arc::new(move |u: f64| {
        let [_, [dx, dy], _] = c.jet(u);
        (dx * dx + k * dy * dy).sqrt()
    });
    let arclength = CumulativeIntegral::new(speed, u0, u1, REPARAM_PANELS, DEFAULT_TOL)?;
    if !arclength.is_strictly_increasing() {
        return Err(Error::NonMonotone { at: u0 });
    }
    let length = arclength.total();
    let repr = Repr::Reparam(Arc::new(Reparam { curve, metric, arclength }));
    Ok((length, ProfileFunction { length, repr }))
}

/// Converts a graph `f` on `[0, d]` with `f(0) = f(d) = 0` into its
/// arc-length profile under the chosen metric. Returns `(L, ζ)` with
/// `ζ(s(x)) = f(x)`.
pub fn graph_to_arclength_profile(
    f: Arc<dyn GraphFunction>,
    metric: ArcMetric,
    tol: &Tolerances,
) -> Result<(f64, ProfileFunction)> {
    let d = f.domain_end();
    check_length(d)?;
    let (f0, fd) = (f.jet(0.0)[0], f.jet(d)[0]);
    if f0.abs() > tol.bc || fd.abs() > tol.bc {
        return Err(Error::InvalidInput(format!("graph must vanish at both ends, got f(0) = {f0}, f(d) = {fd}")));
    }
    plane_curve_to_arclength_profile(Arc::new(GraphAsCurve(f)), metric)
}

// ---------------------------------------------------------------------------
// Fundamental data

/// The pair `(b, ζ)` from which a pillow box is rebuilt, with the cached
/// rectangle half-width `a = ½∫₀ᴸ √(1 − ζ′²) ds`.
#[derive(Debug, Clone)]
pub struct FundamentalData {
    b: f64,
    zeta: ProfileFunction,
    a: f64,
}

impl FundamentalData {
    pub fn new(b: f64, zeta: ProfileFunction) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::DomainError(format!("half-height b must be positive, got {b}")));
        }
        let len = zeta.domain_end();
        let z = zeta.clone();
        let width = adaptive_simpson(&move |s: f64| z.speed_factor(s, 1.0), 0.0, len, DEFAULT_TOL)?;
        Ok(Self { b, zeta, a: 0.5 * width })
    }

    /// Builds the data and rejects it unless every condition passes.
    pub fn validated(b: f64, zeta: ProfileFunction, n_samples: usize, tol: &Tolerances) -> Result<Self> {
        let report = validate_fundamental_data(b, &zeta, n_samples, tol)?;
        if !report.pass {
            let failed: Vec<_> = report.conditions.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            return Err(Error::InvalidInput(format!("fundamental data fails: {}", failed.join(", "))));
        }
        Self::new(b, zeta)
    }

    /// The example data `b = 1`, `ζ(s) = √2 − √((s − 1)² + 1)` on `[0, 2]`.
    pub fn example() -> Self {
        Self::new(1.0, ProfileFunction::hyperbolic(2.0, 1.0).expect("valid")).expect("valid")
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn zeta(&self) -> &ProfileFunction {
        &self.zeta
    }

    pub fn length(&self) -> f64 {
        self.zeta.domain_end()
    }

    pub fn half_width(&self) -> f64 {
        self.a
    }

    /// `[εL, (1 − ε)L]`, the range on which frames and metrics are sampled.
    pub fn guarded_range(&self, eps: f64) -> (f64, f64) {
        let l = self.length();
        (eps * l, (1.0 - eps) * l)
    }

    pub fn descriptor(&self) -> Option<FundamentalDataDescriptor> {
        Some(FundamentalDataDescriptor { b: self.b, zeta: self.zeta.descriptor()? })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionMargin {
    pub name: String,
    /// Worst-case margin; positive means satisfied.
    pub margin: f64,
    pub at: f64,
    pub pass: bool,
}

impl ConditionMargin {
    pub(crate) fn new(name: &str, margin: f64, at: f64) -> Self {
        Self { name: name.to_string(), margin, at, pass: margin > 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub conditions: Vec<ConditionMargin>,
    /// `1 − 2ζ′²` at `s = 0` and `s = L`; informational, never fails the report.
    pub endpoint_margins: Vec<ConditionMargin>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn condition(&self, name: &str) -> Option<&ConditionMargin> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn worst<I: Iterator<Item = (f64, f64)>>(it: I) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NAN), |acc, (m, s)| if m < acc.0 { (m, s) } else { acc })
}

/// Checks the fundamental-data conditions on the open-interval grid
/// `sᵢ = L·i/(n+1)`, `i = 1..n`.
pub fn validate_fundamental_data(
    b: f64,
    zeta: &ProfileFunction,
    n_samples: usize,
    tol: &Tolerances,
) -> Result<ValidationReport> {
    let len = zeta.domain_end();
    if !(len > 0.0) {
        return Err(Error::DomainError(format!("profile length {len} is not positive")));
    }
    if !(b > 0.0) {
        return Err(Error::DomainError(format!("half-height b = {b} is not positive")));
    }
    if n_samples < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 samples, got {n_samples}")));
    }
    let jets: Vec<(f64, [f64; 3])> = (1..=n_samples)
        .map(|i| {
            let s = len * i as f64 / (n_samples + 1) as f64;
            (s, zeta.jet(s))
        })
        .collect();
    let ends = [(0.0, zeta.jet(0.0)), (len, zeta.jet(len))];
    for (s, j) in jets.iter().chain(&ends) {
        if j.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEvaluation { at: *s });
        }
    }

    let (bc, bc_at) = worst(ends.iter().map(|(s, j)| (tol.bc - j[0].abs(), *s)));
    let (pos, pos_at) = worst(jets.iter().map(|(s, j)| (j[0], *s)));
    let (below, below_at) = worst(jets.iter().map(|(s, j)| (b - j[0], *s)));
    let (conc, conc_at) = worst(jets.iter().map(|(s, j)| (-j[2], *s)));
    let (slope, slope_at) = worst(jets.iter().map(|(s, j)| (1.0 - 2.0 * j[1] * j[1], *s)));

    let conditions = vec![
        ConditionMargin::new("boundary", bc, bc_at),
        ConditionMargin::new("positive", pos, pos_at),
        ConditionMargin::new("below_b", below, below_at),
        ConditionMargin::new("concave", conc, conc_at),
        ConditionMargin::new("slope", slope, slope_at),
    ];
    let endpoint_margins = ends
        .iter()
        .map(|(s, j)| ConditionMargin::new("endpoint_slope", 1.0 - 2.0 * j[1] * j[1], *s))
        .collect();
    let pass = conditions.iter().all(|c| c.pass);
    Ok(ValidationReport { conditions, endpoint_margins, pass })
}

// ---------------------------------------------------------------------------
// JSON descriptors

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum ProfileShape {
    Hyperbolic {
        r: f64,
    },
    Circular {
        radius: f64,
    },
    Poly {
        coeffs: Vec<f64>,
    },
    Table {
        s: Vec<f64>,
        zeta: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        end_slopes: Option<[f64; 2]>,
    },
}

/// `{"kind": ..., "params": {...}, "L": number}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileDescriptor {
    #[serde(flatten)]
    pub shape: ProfileShape,
    #[serde(rename = "L")]
    pub length: f64,
}

impl ProfileDescriptor {
    pub fn build(&self) -> Result<ProfileFunction> {
        match &self.shape {
            ProfileShape::Hyperbolic { r } => ProfileFunction::hyperbolic(self.length, *r),
            ProfileShape::Circular { radius } => ProfileFunction::circular_arc(self.length, *radius),
            ProfileShape::Poly { coeffs } => ProfileFunction::polynomial(self.length, coeffs.clone()),
            ProfileShape::Table { s, zeta, end_slopes } => {
                let p = ProfileFunction::table(s.clone(), zeta.clone(), end_slopes.map(|[a, b]| (a, b)))?;
                if (p.domain_end() - self.length).abs() > 1e-12 * self.length.max(1.0) {
                    return Err(Error::InvalidInput(format!(
                        "table ends at s = {} but L = {}",
                        p.domain_end(),
                        self.length
                    )));
                }
                Ok(p)
            }
        }
    }
}

/// `{"b": number, "zeta": <profile descriptor>}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDataDescriptor {
    pub b: f64,
    pub zeta: ProfileDescriptor,
}

impl FundamentalDataDescriptor {
    pub fn build(&self) -> Result<FundamentalData> {
        FundamentalData::new(self.b, self.zeta.build()?)
    }

    pub fn example() -> Self {
        Self {
            b: 1.0,
            zeta: ProfileDescriptor { shape: ProfileShape::Hyperbolic { r: 1.0 }, length: 2.0 },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_zeta() -> ProfileFunction {
        ProfileFunction::hyperbolic(2.0, 1.0).unwrap()
    }

    #[test]
    fn example_closed_form() {
        let z = example_zeta();
        for &s in &[0.0f64, 0.3, 1.0, 1.6, 2.0] {
            let exact = 2f64.sqrt() - ((s - 1.0) * (s - 1.0) + 1.0).sqrt();
            assert!((z.value(s) - exact).abs() < 1e-15);
        }
        assert!(z.value(0.0).abs() < 1e-15 && z.value(2.0).abs() < 1e-15);
        assert!((z.d1(0.5) - 0.5 / 1.25f64.sqrt()).abs() < 1e-15);
        assert_eq!(z.d2(1.0), -1.0);
    }

    #[test]
    fn example_is_fundamental_data() {
        let r = validate_fundamental_data(1.0, &example_zeta(), 99, &Tolerances::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.conditions.iter().all(|c| c.margin > 0.0));
        // 1 − 2ζ′² vanishes at both corners
        for m in &r.endpoint_margins {
            assert!(m.margin.abs() < 1e-15);
        }
    }

    #[test]
    fn zero_profile_fails_positivity() {
        let z = ProfileFunction::polynomial(2.0, vec![0.0]).unwrap();
        let r = validate_fundamental_data(1.0, &z, 9, &Tolerances::default()).unwrap();
        assert!(!r.pass);
        let pos = r.condition("positive").unwrap();
        assert!(!pos.pass);
        assert_eq!(pos.margin, 0.0);
    }

    #[test]
    fn short_half_height_fails() {
        let r = validate_fundamental_data(0.3, &example_zeta(), 99, &Tolerances::default()).unwrap();
        assert!(!r.pass);
        let c = r.condition("below_b").unwrap();
        assert!((c.margin - (0.3 - (2f64.sqrt() - 1.0))).abs() < 1e-12);
        assert!((c.margin + 0.1142).abs() < 1e-4);
        assert_eq!(c.at, 1.0);
    }

    #[test]
    fn validation_errors() {
        let tol = Tolerances::default();
        assert!(matches!(
            validate_fundamental_data(0.0, &example_zeta(), 9, &tol),
            Err(Error::DomainError(_))
        ));
        let nan = ProfileFunction::polynomial(1.0, vec![f64::MAX, f64::MAX]).unwrap();
        let nan_err = validate_fundamental_data(1.0, &nan, 9, &tol).unwrap_err();
        assert!(matches!(nan_err, Error::NonFiniteEvaluation { .. }));
        assert!(ProfileFunction::hyperbolic(0.0, 1.0).is_err());
    }

    #[test]
    fn half_width_of_example() {
        let d = FundamentalData::example();
        assert!((2.0 * d.half_width() - 2.0 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-9);
    }

    #[test]
    fn builtin_derivatives_match_finite_differences() {
        let profiles = [
            example_zeta(),
            ProfileFunction::circular_arc(2.0, 1.5).unwrap(),
            ProfileFunction::polynomial(2.0, vec![0.0, 0.6, -0.3]).unwrap(),
        ];
        let h = 1e-5;
        for p in &profiles {
            for i in 1..=100 {
                let s = p.domain_end() * i as f64 / 101.0;
                let fd1 = (p.value(s + h) - p.value(s - h)) / (2.0 * h);
                let fd2 = (p.d1(s + h) - p.d1(s - h)) / (2.0 * h);
                let fd3 = (p.d2(s + h) - p.d2(s - h)) / (2.0 * h);
                let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-3);
                assert!(rel(fd1, p.d1(s)) < 1e-6, "{:?} d1 at {s}", p.kind());
                assert!(rel(fd2, p.d2(s)) < 1e-6, "{:?} d2 at {s}", p.kind());
                assert!((fd3 - p.d3(s).unwrap()).abs() < 1e-6 * p.d3(s).unwrap().abs().max(1.0));
            }
        }
    }

    #[test]
    fn spline_derivatives_are_second_order_consistent() {
        let z = example_zeta();
        let s: Vec<f64> = (0..=40).map(|i| 2.0 * i as f64 / 40.0).collect();
        let y: Vec<f64> = s.iter().map(|&t| z.value(t)).collect();
        let spline = ProfileFunction::table(s, y, Some((z.d1(0.0), z.d1(2.0)))).unwrap();
        for &h in &[1e-2, 5e-3] {
            let mut worst: f64 = 0.0;
            for i in 1..100 {
                let t = 0.02 + 1.96 * i as f64 / 100.0;
                let fd = (spline.value(t + h) - spline.value(t - h)) / (2.0 * h);
                worst = worst.max((fd - spline.d1(t)).abs());
            }
            // central differences of a cubic piece: error h²·|S‴|/6
            assert!(worst < h * h, "h = {h}: {worst}");
        }
        assert!((spline.value(1.0) - z.value(1.0)).abs() < 1e-5);
    }

    #[test]
    fn descriptor_json_shape() {
        let json = r#"{"b": 1, "zeta": {"kind": "hyperbolic", "params": {"r": 1}, "L": 2}}"#;
        let d: FundamentalDataDescriptor = serde_json::from_str(json).unwrap();
        assert_eq!(d, FundamentalDataDescriptor::example());
        let back = serde_json::to_value(&d).unwrap();
        assert_eq!(back["zeta"]["kind"], "hyperbolic");
        assert_eq!(back["zeta"]["L"], 2.0);
        let data = d.build().unwrap();
        assert_eq!(data.descriptor().unwrap(), d);
    }

    #[test]
    fn flat_graph_has_domain_length() {
        let f = Arc::new(PolynomialGraph { d: 2.0, coeffs: vec![0.0] });
        let (len, zeta) = graph_to_arclength_profile(f, ArcMetric::PlaneCrease, &Tolerances::default()).unwrap();
        assert!((len - 2.0).abs() < 1e-14);
        assert_eq!(zeta.kind(), ProfileKind::Reparametrized);
        for &s in &[0.0, 0.7, 2.0] {
            assert!(zeta.value(s).abs() < 1e-15);
        }
    }

    #[test]
    fn graph_must_vanish_at_ends() {
        let f = Arc::new(PolynomialGraph { d: 1.0, coeffs: vec![0.1] });
        assert!(graph_to_arclength_profile(f, ArcMetric::SpaceCrease, &Tolerances::default()).is_err());
    }
}
