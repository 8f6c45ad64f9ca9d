//! Crease-preserving isometric deformations of a quarter and the
//! pattern-scaling family.
//!
//! For a schedule `(λ(t), μ(t))` the deformed quarter is
//!
//! * crease `c^t(s) = (∫₀ˢ σ^t + μ, ζ(s), λ ζ(s))`, `σ^t = √(1 − (1 + λ²) ζ′²)`;
//! * upper ruling `ξ^t = (0, λ² − 1, −2λ) / (1 + λ²)`;
//! * lower ruling `(0, −1, 0)`.
//!
//! At `λ = 1` this is the pillow quarter, at `λ = 0` the developing map.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::development::CreasePatternCurve;
use crate::error::{Error, Result};
use crate::kernel::{AngleFunction, DevelopableStrip, SpaceCurve, Vec3};
use crate::mesh::{assemble_reflected, sample_and_triangulate, AssemblyMode, TriMesh};
use crate::pillow::{assemble_box, quarter_parametrization_with, QuarterMap, CREASE_PANELS};
use crate::profile::{
    plane_curve_to_arclength_profile, ArcMetric, ConditionMargin, FundamentalData, PlaneCurve, ProfileFunction,
    ValidationReport,
};
use crate::quadrature::CumulativeIntegral;

const SCHEDULE_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedSchedule {
    #[serde(rename = "1-t")]
    OneMinusT,
    /// `cos(πt/2)`
    #[serde(rename = "cos")]
    Cos,
    #[serde(rename = "zero")]
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum ScheduleShape {
    /// `Σ cₖ tᵏ`
    Poly { coeffs: Vec<f64> },
    /// Piecewise linear through `(tᵢ, valuesᵢ)`, constant outside.
    Table {
        #[serde(alias = "s")]
        t: Vec<f64>,
        #[serde(alias = "zeta")]
        values: Vec<f64>,
    },
}

/// A continuous scalar function of `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleFn {
    Named(NamedSchedule),
    Constant(f64),
    Shape(ScheduleShape),
}

impl Default for ScheduleFn {
    fn default() -> Self {
        ScheduleFn::Named(NamedSchedule::Zero)
    }
}

impl ScheduleFn {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ScheduleFn::Named(NamedSchedule::OneMinusT) => 1.0 - t,
            ScheduleFn::Named(NamedSchedule::Cos) => (std::f64::consts::FRAC_PI_2 * t).cos(),
            ScheduleFn::Named(NamedSchedule::Zero) => 0.0,
            ScheduleFn::Constant(c) => *c,
            ScheduleFn::Shape(ScheduleShape::Poly { coeffs }) => coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c),
            ScheduleFn::Shape(ScheduleShape::Table { t: ts, values }) => {
                let k = ts.partition_point(|&x| x <= t);
                if k == 0 {
                    values[0]
                } else if k == ts.len() {
                    values[ts.len() - 1]
                } else {
                    let w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
                    values[k - 1] + w * (values[k] - values[k - 1])
                }
            }
        }
    }

    fn check(&self) -> Result<()> {
        if let ScheduleFn::Shape(ScheduleShape::Table { t, values }) = self {
            if t.len() < 2 || t.len() != values.len() {
                return Err(Error::InvalidInput("schedule table needs at least 2 matching samples".into()));
            }
            if t.windows(2).any(|w| !(w[1] > w[0])) || t.iter().chain(values).any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("schedule table t must increase strictly".into()));
            }
        }
        Ok(())
    }
}

/// `{"lambda": ..., "mu": ...}`; `mu` defaults to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub lambda: ScheduleFn,
    #[serde(default)]
    pub mu: ScheduleFn,
}

impl Schedule {
    /// `λ = 1 − t`, `μ = 0`.
    pub fn linear() -> Self {
        Self { lambda: ScheduleFn::Named(NamedSchedule::OneMinusT), mu: ScheduleFn::default() }
    }

    /// `λ = cos(πt/2)`, `μ = 0`.
    pub fn cosine() -> Self {
        Self { lambda: ScheduleFn::Named(NamedSchedule::Cos), mu: ScheduleFn::default() }
    }

    pub fn lambda(&self, t: f64) -> f64 {
        self.lambda.eval(t)
    }

    pub fn mu(&self, t: f64) -> f64 {
        self.mu.eval(t)
    }

    /// `ψ(t) = √(1 + λ²)`.
    pub fn psi(&self, t: f64) -> f64 {
        self.lambda(t).hypot(1.0)
    }

    pub fn check(&self) -> Result<()> {
        self.lambda.check()?;
        self.mu.check()
    }
}

/// `min over interior s of 1 − (1 + λ²) ζ′(s)²` and where it occurs.
fn slope_margin(zeta: &ProfileFunction, lambda: f64, n_s: usize) -> (f64, f64) {
    let len = zeta.domain_end();
    let k = 1.0 + lambda * lambda;
    (1..=n_s)
        .map(|i| {
            let s = len * i as f64 / (n_s + 1) as f64;
            let d = zeta.d1(s);
            (1.0 - k * d * d, s)
        })
        .fold((f64::INFINITY, f64::NAN), |a, m| if m.0 < a.0 { m } else { a })
}

/// Margins for the endpoint values of `λ`, `μ` and for
/// `(1 + λ²) ζ′² < 1` on `n_t` uniform times in `[0, 1]` and `n_s` interior
/// parameters. The `at` field of `slope` is the time of the worst sample.
pub fn validate_schedule(
    schedule: &Schedule,
    data: &FundamentalData,
    n_t: usize,
    n_s: usize,
    tol: &Tolerances,
) -> Result<ValidationReport> {
    if n_t < 3 || n_s < 3 {
        return Err(Error::InvalidInput(format!("need n_t, n_s >= 3, got {n_t}, {n_s}")));
    }
    schedule.check()?;
    let exact = |name: &str, value: f64, target: f64, at: f64| ConditionMargin::new(name, tol.bc - (value - target).abs(), at);
    let mut slope = (f64::INFINITY, f64::NAN);
    for i in 0..n_t {
        let t = i as f64 / (n_t - 1) as f64;
        let lambda = schedule.lambda(t);
        let (m, _) = slope_margin(data.zeta(), lambda, n_s);
        if !lambda.is_finite() || !schedule.mu(t).is_finite() {
            return Err(Error::NonFiniteEvaluation { at: t });
        }
        if m < slope.0 {
            slope = (m, t);
        }
    }
    let conditions = vec![
        exact("lambda_start", schedule.lambda(0.0), 1.0, 0.0),
        exact("lambda_end", schedule.lambda(1.0), 0.0, 1.0),
        exact("mu_start", schedule.mu(0.0), 0.0, 0.0),
        exact("mu_end", schedule.mu(1.0), 0.0, 1.0),
        ConditionMargin::new("slope", slope.0, slope.1),
    ];
    let pass = conditions.iter().all(|c| c.pass);
    Ok(ValidationReport { conditions, endpoint_margins: Vec::new(), pass })
}

/// `c^t(s) = (∫₀ˢ σ^t + μ, ζ, λζ)`.
#[derive(Debug, Clone)]
pub struct DeformedCrease {
    zeta: ProfileFunction,
    lambda: f64,
    mu: f64,
    x: CumulativeIntegral,
}

impl DeformedCrease {
    pub fn new(zeta: ProfileFunction, lambda: f64, mu: f64, tol: f64) -> Result<Self> {
        let z = zeta.clone();
        let k = 1.0 + lambda * lambda;
        let sigma = Arc::new(move |s: f64| z.speed_factor(s, k));
        let x = CumulativeIntegral::new(sigma, 0.0, zeta.domain_end(), CREASE_PANELS, tol)?;
        Ok(Self { zeta, lambda, mu, x })
    }

    fn psi2(&self) -> f64 {
        1.0 + self.lambda * self.lambda
    }

    pub fn sigma(&self, s: f64) -> f64 {
        self.zeta.speed_factor(s, self.psi2())
    }
}

impl SpaceCurve for DeformedCrease {
    fn domain(&self) -> (f64, f64) {
        (0.0, self.zeta.domain_end())
    }

    fn position(&self, s: f64) -> Vec3 {
        let z = self.zeta.value(s);
        Vec3::new(self.x.eval(s) + self.mu, z, self.lambda * z)
    }

    fn d1(&self, s: f64) -> Vec3 {
        let dz = self.zeta.d1(s);
        Vec3::new(self.sigma(s), dz, self.lambda * dz)
    }

    fn d2(&self, s: f64) -> Vec3 {
        let [_, dz, ddz] = self.zeta.jet(s);
        Vec3::new(-self.psi2() * dz * ddz / self.sigma(s), ddz, self.lambda * ddz)
    }

    fn d3(&self, s: f64) -> Option<Vec3> {
        let [_, dz, ddz] = self.zeta.jet(s);
        let dddz = self.zeta.d3(s)?;
        let (k, sg) = (self.psi2(), self.sigma(s));
        let x3 = -k * (ddz * ddz + dz * dddz) / sg - k * k * dz * dz * ddz * ddz / (sg * sg * sg);
        Some(Vec3::new(x3, dddz, self.lambda * dddz))
    }
}

/// First angular function of the upper strip, `α = atan2(λ, σ^t)`.
struct DeformedAlpha(Arc<DeformedCrease>);

impl AngleFunction for DeformedAlpha {
    fn value(&self, s: f64) -> f64 {
        self.0.lambda.atan2(self.0.sigma(s))
    }

    fn derivative(&self, s: f64) -> f64 {
        let c = &self.0;
        let [_, dz, ddz] = c.zeta.jet(s);
        let sg = c.sigma(s);
        let dsg = -c.psi2() * dz * ddz / sg;
        -c.lambda * dsg / (c.lambda * c.lambda + sg * sg)
    }
}

/// The quarter `X^t` at one stage of a deformation.
#[derive(Debug, Clone)]
pub struct DeformedQuarter {
    t: f64,
    data: FundamentalData,
    crease: Arc<DeformedCrease>,
    xi: Vec3,
}

pub const LOWER_RULING: Vec3 = Vec3::new(0.0, -1.0, 0.0);

/// `ξ = (0, λ² − 1, −2λ) / (1 + λ²)`.
pub fn upper_ruling_for(lambda: f64) -> Vec3 {
    let k = 1.0 + lambda * lambda;
    Vec3::new(0.0, (lambda * lambda - 1.0) / k, -2.0 * lambda / k)
}

impl DeformedQuarter {
    /// The stage with parameters `λ`, `μ`; `t` is carried as a label.
    pub fn from_parameters(data: &FundamentalData, t: f64, lambda: f64, mu: f64, tol: &Tolerances) -> Result<Self> {
        if !(lambda.is_finite() && mu.is_finite()) {
            return Err(Error::NonFiniteEvaluation { at: t });
        }
        let (margin, at) = slope_margin(data.zeta(), lambda, SCHEDULE_SAMPLES);
        if !(margin > 0.0) {
            return Err(Error::ScheduleViolation(format!(
                "(1 + λ²)ζ′² = {} >= 1 at s = {at} (t = {t}, λ = {lambda})",
                1.0 - margin
            )));
        }
        let crease = Arc::new(DeformedCrease::new(data.zeta().clone(), lambda, mu, tol.quad)?);
        Ok(Self { t, data: data.clone(), crease, xi: upper_ruling_for(lambda) })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn lambda(&self) -> f64 {
        self.crease.lambda
    }

    pub fn mu(&self) -> f64 {
        self.crease.mu
    }

    pub fn crease(&self) -> &Arc<DeformedCrease> {
        &self.crease
    }

    pub fn xi(&self) -> Vec3 {
        self.xi
    }

    /// `Φ^t(s) = X^t(s, ζ(s) − b)`.
    pub fn vertical_end(&self, s: f64) -> Vec3 {
        self.point(s, self.v_bounds(s).0)
    }

    /// `Ψ^t(s) = X^t(s, ζ(s))`.
    pub fn horizontal_end(&self, s: f64) -> Vec3 {
        self.point(s, self.v_bounds(s).1)
    }

    /// The upper strip as a developable strip along `c^t`; its dual is the
    /// lower strip. Needs `λ ≠ 0`.
    pub fn upper_strip(&self) -> Result<DevelopableStrip> {
        let b = self.data.b();
        DevelopableStrip::new(self.crease.clone(), Arc::new(DeformedAlpha(self.crease.clone())), (-b, b))
    }
}

impl QuarterMap for DeformedQuarter {
    fn data(&self) -> &FundamentalData {
        &self.data
    }

    fn crease_point(&self, s: f64) -> Vec3 {
        self.crease.position(s)
    }

    fn upper_ruling(&self, _s: f64) -> Vec3 {
        self.xi
    }

    fn lower_ruling(&self, _s: f64) -> Vec3 {
        LOWER_RULING
    }
}

pub fn deformed_quarter(data: &FundamentalData, schedule: &Schedule, t: f64) -> Result<DeformedQuarter> {
    deformed_quarter_with(data, schedule, t, &Tolerances::default())
}

pub fn deformed_quarter_with(
    data: &FundamentalData,
    schedule: &Schedule,
    t: f64,
    tol: &Tolerances,
) -> Result<DeformedQuarter> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!("t = {t} is outside [0, 1]")));
    }
    schedule.check()?;
    DeformedQuarter::from_parameters(data, t, schedule.lambda(t), schedule.mu(t), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndDepth {
    /// `min_s` of the third component of `Ψ^t`.
    pub depth: f64,
    pub at: f64,
}

/// Lowest point of the horizontal end of the stage with parameter `λ`
/// (and `μ = 0`), by a 512-sample scan refined with golden-section search.
pub fn horizontal_end_depth(data: &FundamentalData, lambda: f64) -> Result<EndDepth> {
    let q = DeformedQuarter::from_parameters(data, f64::NAN, lambda, 0.0, &Tolerances::default())?;
    Ok(end_depth(&q))
}

pub fn end_depth(q: &DeformedQuarter) -> EndDepth {
    let len = q.data.length();
    let n = 512;
    let z = |s: f64| q.horizontal_end(s).z;
    let (mut best, mut k) = (f64::INFINITY, 0);
    for i in 0..=n {
        let v = z(len * i as f64 / n as f64);
        if v < best {
            best = v;
            k = i;
        }
    }
    let h = len / n as f64;
    let (mut a, mut b) = ((k as f64 - 1.0).max(0.0) * h, ((k + 1) as f64 * h).min(len));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (z(c), z(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = z(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = z(d);
        }
    }
    let (s, v) = if fc < fd { (c, fc) } else { (d, fd) };
    if v < best {
        EndDepth { depth: v, at: s }
    } else {
        EndDepth { depth: best, at: k as f64 * h }
    }
}

/// `P^t ∪ ρ_V(P^t) ∪ ρ_H(P^t) ∪ ρ_H ρ_V(P^t)`, welded where the pieces meet.
/// Open seams are left for the topology report.
pub fn assemble_deformed(
    data: &FundamentalData,
    schedule: &Schedule,
    t: f64,
    n_s: usize,
    n_v: usize,
    tol: &Tolerances,
) -> Result<TriMesh> {
    let q = deformed_quarter_with(data, schedule, t, tol)?;
    assemble_quarter(&q, n_s, n_v, tol)
}

pub fn assemble_quarter<Q: QuarterMap + ?Sized>(q: &Q, n_s: usize, n_v: usize, tol: &Tolerances) -> Result<TriMesh> {
    let piece = sample_and_triangulate(q, n_s, n_v, tol)?;
    assemble_reflected(&piece, q.data().b(), tol, AssemblyMode::Report)
}

/// `u ↦ (x₁(u), (1 − t) ζ(u))`: the crease pattern squeezed vertically.
struct ScaledPattern {
    pattern: CreasePatternCurve,
    zeta: ProfileFunction,
    scale: f64,
}

impl PlaneCurve for ScaledPattern {
    fn domain(&self) -> (f64, f64) {
        (0.0, self.zeta.domain_end())
    }

    fn jet(&self, u: f64) -> [[f64; 2]; 3] {
        let p = self.pattern.position(u);
        let (d1, d2) = (self.pattern.d1(u), self.pattern.d2(u));
        let k = self.scale;
        [[p.x, k * p.y], [d1.x, k * d1.y], [d2.x, k * d2.y]]
    }
}

#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub t: f64,
    pub data: FundamentalData,
    pub mesh: TriMesh,
}

/// Fundamental data of the box whose crease pattern is the graph of
/// `(1 − t) ψ` over the same rectangle.
pub fn pattern_scaling_data(data: &FundamentalData, t: f64, tol: &Tolerances) -> Result<FundamentalData> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!("t = {t} is outside [0, 1]")));
    }
    let pattern = CreasePatternCurve::new(data.zeta().clone(), tol.quad)?;
    let curve = Arc::new(ScaledPattern { pattern, zeta: data.zeta().clone(), scale: 1.0 - t });
    let (_, zeta) = plane_curve_to_arclength_profile(curve, ArcMetric::PlaneCrease)?;
    FundamentalData::new(data.b(), zeta)
}

/// The member `M̄^t` of the pattern-scaling family, a closed pillow box
/// sharing the double rectangle of `data`. At `t = 1` it is flat.
pub fn pattern_scaling_family(
    data: &FundamentalData,
    t: f64,
    n_s: usize,
    n_v: usize,
    tol: &Tolerances,
) -> Result<FamilyMember> {
    let member = pattern_scaling_data(data, t, tol)?;
    let quarter = quarter_parametrization_with(&member, tol)?;
    let mesh = assemble_box(&quarter, n_s, n_v, tol)?;
    Ok(FamilyMember { t, data: member, mesh })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::development::developing_map;
    use crate::kernel::measured_metric;
    use crate::pillow::{quarter_parametrization, StripSide};
    use crate::quadrature::adaptive_simpson;

    fn example() -> FundamentalData {
        FundamentalData::example()
    }

    #[test]
    fn schedule_json_forms() {
        let s: Schedule = serde_json::from_str(r#"{"lambda":"1-t"}"#).unwrap();
        assert_eq!(s, Schedule::linear());
        let s: Schedule = serde_json::from_str(r#"{"lambda":"cos","mu":0}"#).unwrap();
        assert!(s.lambda(1.0).abs() < 1e-16);
        let s: Schedule = serde_json::from_str(
            r#"{"lambda":{"kind":"table","params":{"t":[0,0.5,1],"values":[1,0.3,0]}},"mu":{"kind":"poly","params":{"coeffs":[0,0.1,-0.1]}}}"#,
        )
        .unwrap();
        assert!((s.lambda(0.25) - 0.65).abs() < 1e-15);
        assert!((s.mu(0.5) - 0.025).abs() < 1e-15);
        let back: Schedule = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        let alias: Schedule =
            serde_json::from_str(r#"{"lambda":{"kind":"table","params":{"s":[0,1],"zeta":[1,0]}}}"#).unwrap();
        assert!((alias.lambda(0.3) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn schedule_validation() {
        let tol = Tolerances::default();
        let data = example();
        assert!(validate_schedule(&Schedule::linear(), &data, 11, 64, &tol).unwrap().pass);
        assert!(validate_schedule(&Schedule::cosine(), &data, 11, 64, &tol).unwrap().pass);
        let stuck = Schedule { lambda: ScheduleFn::Constant(1.0), mu: ScheduleFn::default() };
        let r = validate_schedule(&stuck, &data, 11, 64, &tol).unwrap();
        assert!(!r.pass && !r.condition("lambda_end").unwrap().pass);
        let steep = Schedule {
            lambda: ScheduleFn::Shape(ScheduleShape::Poly { coeffs: vec![3.0, -3.0] }),
            mu: ScheduleFn::default(),
        };
        let r = validate_schedule(&steep, &data, 11, 64, &tol).unwrap();
        let slope = r.condition("slope").unwrap();
        assert!(!slope.pass);
        assert_eq!(slope.at, 0.0);
        // grid oracle at t = 0: min over interior s of 1 − 10 ζ′²
        let oracle = (1..=64)
            .map(|i| {
                let s = 2.0 * i as f64 / 65.0;
                let d = (1.0 - s) / ((s - 1.0) * (s - 1.0) + 1.0).sqrt();
                1.0 - 10.0 * d * d
            })
            .fold(f64::INFINITY, f64::min);
        assert!((slope.margin - oracle).abs() < 1e-14);
        assert!(validate_schedule(&steep, &data, 2, 64, &tol).is_err());
    }

    #[test]
    fn stage_rejects_violations() {
        let steep = Schedule { lambda: ScheduleFn::Constant(3.0), mu: ScheduleFn::default() };
        assert!(matches!(deformed_quarter(&example(), &steep, 0.5), Err(Error::ScheduleViolation(_))));
        assert!(deformed_quarter(&example(), &Schedule::linear(), 1.5).is_err());
    }

    #[test]
    fn endpoint_stages_collapse() {
        let data = example();
        let x0 = deformed_quarter(&data, &Schedule::linear(), 0.0).unwrap();
        assert_eq!(x0.xi(), Vec3::new(0.0, 0.0, -1.0));
        let x1 = deformed_quarter(&data, &Schedule::linear(), 1.0).unwrap();
        assert_eq!(x1.xi(), Vec3::new(0.0, -1.0, 0.0));
        let (p, y) = (quarter_parametrization(&data).unwrap(), developing_map(&data).unwrap());
        for i in 0..=16 {
            let s = 2.0 * i as f64 / 16.0;
            let (lo, hi) = p.v_bounds(s);
            for k in 0..=4 {
                let v = lo + (hi - lo) * k as f64 / 4.0;
                assert!((x0.point(s, v) - p.point(s, v)).norm() < 1e-12);
                assert!((x1.point(s, v) - y.point(s, v)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn mid_stage_crease_abscissa() {
        let q = DeformedQuarter::from_parameters(&example(), 0.5, 0.5, 0.0, &Tolerances::default()).unwrap();
        // independent fixed-panel Simpson of √(1 − 1.25 ζ′²) on [0, 1]
        let n = 20_000;
        let f = |s: f64| {
            let d2 = (1.0 - s) * (1.0 - s) / ((1.0 - s) * (1.0 - s) + 1.0);
            (1.0 - 1.25 * d2).sqrt()
        };
        let h = 1.0 / n as f64;
        let simpson = (0..n)
            .map(|i| {
                let a = i as f64 * h;
                h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h))
            })
            .sum::<f64>();
        assert!((q.crease_point(1.0).x - simpson).abs() < 1e-12);
        assert!((simpson - 0.8467502013236765).abs() < 1e-12);
    }

    #[test]
    fn structural_identities() {
        let data = example();
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            let q = deformed_quarter(&data, &Schedule::linear(), t).unwrap();
            let lambda = q.lambda();
            assert!((q.xi().norm() - 1.0).abs() < 1e-15);
            for j in 0..=40 {
                let s = 2.0 * j as f64 / 40.0;
                let c = q.crease_point(s);
                assert_eq!(c.y, data.zeta().value(s));
                assert!((c.z - lambda * c.y).abs() < 1e-15);
                assert!((q.vertical_end(s).y - data.b()).abs() < 1e-15);
            }
            for s in [0.0, 2.0] {
                let c = q.crease_point(s);
                assert!(c.y.hypot(c.z) < 1e-15);
            }
        }
    }

    #[test]
    fn every_stage_is_isometric() {
        let data = example();
        let (s0, s1) = data.guarded_range(1e-3);
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            let q = deformed_quarter(&data, &Schedule::linear(), t).unwrap();
            for side in StripSide::BOTH {
                let view = q.strip(side);
                for j in 0..=8 {
                    let s = s0 + (s1 - s0) * j as f64 / 8.0;
                    let (lo, hi) = side.v_range(q.v_bounds(s));
                    let v = 0.5 * (lo + hi);
                    let m = measured_metric(&view, s, v, 1e-5 * 2.0);
                    let res = (m.e - 1.0).abs().max((m.f + data.zeta().d1(s)).abs()).max((m.g - 1.0).abs());
                    assert!(res < 1e-6, "t={t} {side:?} s={s}: {m:?}");
                }
            }
        }
    }

    #[test]
    fn kernel_reproduces_deformed_rulings() {
        let data = example();
        for &lambda in &[1.0, 0.7, 0.3] {
            let q = DeformedQuarter::from_parameters(&data, f64::NAN, lambda, 0.0, &Tolerances::default()).unwrap();
            let strip = q.upper_strip().unwrap();
            for &s in &[0.2, 0.9, 1.0, 1.6] {
                assert!((strip.ruling(s).unwrap() - q.xi()).norm() < 1e-8, "λ={lambda} s={s}");
                assert!((strip.dual().ruling(s).unwrap() - LOWER_RULING).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn horizontal_end_depth_values() {
        let data = example();
        let d = horizontal_end_depth(&data, 0.5).unwrap();
        let expected = -0.3 * (2f64.sqrt() - 1.0);
        assert!((d.depth - expected).abs() < 1e-12, "{d:?}");
        assert!((d.at - 1.0).abs() < 1e-6);
        assert_eq!(horizontal_end_depth(&data, 0.0).unwrap().depth, 0.0);
        assert!(horizontal_end_depth(&data, 1.0).unwrap().depth.abs() < 1e-15);
    }

    #[test]
    fn deformed_meshes_open_and_close() {
        let data = example();
        let tol = Tolerances::default();
        for &(t, closed) in &[(0.0, true), (0.5, false), (1.0, true)] {
            let m = assemble_deformed(&data, &Schedule::linear(), t, 16, 8, &tol).unwrap();
            assert_eq!(m.is_closed(), closed, "t = {t}");
            if closed {
                assert_eq!(m.euler_characteristic(), 2);
                assert!(m.orientation_conflict().is_none());
            } else {
                assert!(m.edge_stats().boundary > 0);
            }
        }
        let flat = assemble_deformed(&data, &Schedule::linear(), 1.0, 16, 8, &tol).unwrap();
        assert!(flat.signed_volume_raw().abs() < 1e-15);
    }

    #[test]
    fn pattern_scaling_endpoints() {
        let data = example();
        let tol = Tolerances::default();
        let m0 = pattern_scaling_family(&data, 0.0, 16, 8, &tol).unwrap();
        let reference = assemble_box(&quarter_parametrization(&data).unwrap(), 16, 8, &tol).unwrap();
        assert_eq!(m0.mesh.vertices.len(), reference.vertices.len());
        let worst = m0.mesh.vertices.iter().zip(&reference.vertices).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
        let flat = pattern_scaling_family(&data, 1.0, 16, 8, &tol).unwrap();
        assert!(flat.mesh.is_closed() && flat.mesh.euler_characteristic() == 2);
        assert!(flat.mesh.signed_volume_raw().abs() < 1e-15);
    }

    #[test]
    fn pattern_scaling_keeps_the_rectangle() {
        let data = example();
        let tol = Tolerances::default();
        for &t in &[0.25, 0.5, 0.95] {
            let member = pattern_scaling_data(&data, t, &tol).unwrap();
            // independent width: ∫√(1 − ζₜ′²) by adaptive Simpson on the member's own profile
            let z = member.zeta().clone();
            let width = adaptive_simpson(&|s: f64| (1.0 - z.d1(s).powi(2)).sqrt(), 0.0, z.domain_end(), 1e-11).unwrap();
            assert!((width - 2.0 * data.half_width()).abs() < 1e-6, "t={t}: {width}");
            assert!((z.value(member.length() * 0.5) - (1.0 - t) * (2f64.sqrt() - 1.0)).abs() < 1e-9);
        }
    }
}
