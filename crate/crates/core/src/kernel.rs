//! Frenet frames, developable strips along space curves, duals, and
//! origami maps.
//!
//! A developable strip along an arc-length curve `c(s)` is the ruled surface
//! `c(s) + v ξ(s)` with
//! `ξ = cos β T + sin β (cos α N + sin α B)`, where the second angular
//! function `β` is forced by the first, `α`, through
//! `cot β = (α′ + τ) / (κ sin α)`.

use std::sync::Arc;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Frames are undefined below this curvature.
pub const KAPPA_MIN: f64 = 1e-8;

/// An arc-length parametrized space curve.
pub trait SpaceCurve: Send + Sync {
    fn domain(&self) -> (f64, f64);
    fn position(&self, s: f64) -> Vec3;
    /// Unit tangent `c′(s)`.
    fn d1(&self, s: f64) -> Vec3;
    fn d2(&self, s: f64) -> Vec3;
    /// `c‴(s)`, when known in closed form.
    fn d3(&self, _s: f64) -> Option<Vec3> {
        None
    }
}

/// Anything sampled as `(s, v) ↦ point`.
pub trait Surface: Sync {
    fn point(&self, s: f64, v: f64) -> Vec3;
}

impl<F: Fn(f64, f64) -> Vec3 + Sync> Surface for F {
    fn point(&self, s: f64, v: f64) -> Vec3 {
        self(s, v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetData {
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub kappa: f64,
    pub tau: f64,
}

fn normal_at(curve: &dyn SpaceCurve, s: f64) -> Vec3 {
    curve.d2(s).normalize()
}

/// Frenet apparatus at `s`. Torsion comes from `c‴` when the curve supplies
/// it, otherwise from a five-point difference of `N` with step `1e-4`.
pub fn frenet_frame(curve: &dyn SpaceCurve, s: f64) -> Result<FrenetData> {
    frenet_frame_with_cutoff(curve, s, KAPPA_MIN)
}

pub fn frenet_frame_with_cutoff(curve: &dyn SpaceCurve, s: f64, kappa_min: f64) -> Result<FrenetData> {
    let t = curve.d1(s);
    let dt = curve.d2(s);
    let kappa = dt.norm();
    if !kappa.is_finite() {
        return Err(Error::NonFiniteEvaluation { at: s });
    }
    if kappa <= kappa_min {
        return Err(Error::VanishingCurvature { at: s, kappa });
    }
    let n = dt / kappa;
    let b = t.cross(&n);
    let tau = match curve.d3(s) {
        Some(ddd) => ddd.dot(&b) / kappa,
        None => {
            let h = 1e-4;
            let dn = (-normal_at(curve, s + 2.0 * h) + 8.0 * normal_at(curve, s + h)
                - 8.0 * normal_at(curve, s - h)
                + normal_at(curve, s - 2.0 * h))
                / (12.0 * h);
            dn.dot(&b)
        }
    };
    Ok(FrenetData { t, n, b, kappa, tau })
}

/// Solves the developability condition `cot β = (α′ + τ)/(κ sin α)` for
/// `β ∈ (0, π)`.
pub fn beta_from_alpha(alpha: f64, alpha_prime: f64, kappa: f64, tau: f64) -> Result<f64> {
    let sa = alpha.sin();
    if sa.abs() < 1e-300 {
        return Err(Error::DegenerateAngle);
    }
    if !(kappa > 0.0) {
        return Err(Error::VanishingCurvature { at: f64::NAN, kappa });
    }
    let cot = (alpha_prime + tau) / (kappa * sa);
    Ok(1f64.atan2(cot))
}

/// A first angular function `α(s)`.
pub trait AngleFunction: Send + Sync {
    fn value(&self, s: f64) -> f64;

    fn derivative(&self, s: f64) -> f64 {
        let h = 1e-6;
        (self.value(s + h) - self.value(s - h)) / (2.0 * h)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantAngle(pub f64);

impl AngleFunction for ConstantAngle {
    fn value(&self, _s: f64) -> f64 {
        self.0
    }

    fn derivative(&self, _s: f64) -> f64 {
        0.0
    }
}

/// `α` and `α′` from closures.
pub struct FnAngle<F, D> {
    pub value: F,
    pub derivative: D,
}

impl<F, D> AngleFunction for FnAngle<F, D>
where
    F: Fn(f64) -> f64 + Send + Sync,
    D: Fn(f64) -> f64 + Send + Sync,
{
    fn value(&self, s: f64) -> f64 {
        (self.value)(s)
    }

    fn derivative(&self, s: f64) -> f64 {
        (self.derivative)(s)
    }
}

struct Negated(Arc<dyn AngleFunction>);

impl AngleFunction for Negated {
    fn value(&self, s: f64) -> f64 {
        -self.0.value(s)
    }

    fn derivative(&self, s: f64) -> f64 {
        -self.0.derivative(s)
    }
}

/// Metric coefficients `E ds² + 2F ds dv + G dv²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl Metric {
    pub fn new(e: f64, f: f64, g: f64) -> Self {
        Self { e, f, g }
    }

    /// Largest componentwise difference.
    pub fn max_diff(&self, other: &Metric) -> f64 {
        (self.e - other.e).abs().max((self.f - other.f).abs()).max((self.g - other.g).abs())
    }

    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }
}

/// Central-difference first fundamental form of a sampled surface.
pub fn measured_metric(surface: &(impl Surface + ?Sized), s: f64, v: f64, h: f64) -> Metric {
    let xs = (surface.point(s + h, v) - surface.point(s - h, v)) / (2.0 * h);
    let xv = (surface.point(s, v + h) - surface.point(s, v - h)) / (2.0 * h);
    Metric::new(xs.dot(&xs), xs.dot(&xv), xv.dot(&xv))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripAngles {
    pub frame: FrenetData,
    pub alpha: f64,
    pub alpha_prime: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripGeometry {
    pub point: Vec3,
    /// Unit normal `ν = −sin α N + cos α B`.
    pub normal: Vec3,
    /// Unit conormal `n_g = cos α N + sin α B`.
    pub conormal: Vec3,
    /// `κ_g = κ cos α`.
    pub kappa_g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricComparison {
    pub closed_form: Metric,
    pub measured: Metric,
}

impl MetricComparison {
    pub fn discrepancy(&self) -> f64 {
        self.closed_form.max_diff(&self.measured)
    }
}

/// A developable surface along a crease, determined by its first angular
/// function.
#[derive(Clone)]
pub struct DevelopableStrip {
    crease: Arc<dyn SpaceCurve>,
    alpha: Arc<dyn AngleFunction>,
    v_range: (f64, f64),
}

impl std::fmt::Debug for DevelopableStrip {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DevelopableStrip")
            .field("domain", &self.crease.domain())
            .field("v_range", &self.v_range)
            .finish()
    }
}

impl DevelopableStrip {
    /// `v_range = (δ, ε)` with `δ ≤ 0 ≤ ε`.
    pub fn new(crease: Arc<dyn SpaceCurve>, alpha: Arc<dyn AngleFunction>, v_range: (f64, f64)) -> Result<Self> {
        if !(v_range.0 <= 0.0 && 0.0 <= v_range.1) {
            return Err(Error::InvalidInput(format!("v range {v_range:?} must contain 0")));
        }
        Ok(Self { crease, alpha, v_range })
    }

    pub fn crease(&self) -> &Arc<dyn SpaceCurve> {
        &self.crease
    }

    pub fn alpha(&self) -> &Arc<dyn AngleFunction> {
        &self.alpha
    }

    pub fn v_range(&self) -> (f64, f64) {
        self.v_range
    }

    pub fn contains(&self, s: f64, v: f64) -> bool {
        let (s0, s1) = self.crease.domain();
        s >= s0 && s <= s1 && v >= self.v_range.0 && v <= self.v_range.1
    }

    pub fn angles(&self, s: f64) -> Result<StripAngles> {
        let frame = frenet_frame(&*self.crease, s)?;
        let alpha = self.alpha.value(s);
        let alpha_prime = self.alpha.derivative(s);
        let beta = beta_from_alpha(alpha, alpha_prime, frame.kappa, frame.tau)?;
        Ok(StripAngles { frame, alpha, alpha_prime, beta })
    }

    pub fn beta(&self, s: f64) -> Result<f64> {
        Ok(self.angles(s)?.beta)
    }

    /// `β′` by central differences (step `1e-5`).
    pub fn beta_prime(&self, s: f64) -> Result<f64> {
        let h = 1e-5;
        Ok((self.beta(s + h)? - self.beta(s - h)?) / (2.0 * h))
    }

    fn ruling_from(a: &StripAngles) -> Vec3 {
        let (sa, ca) = a.alpha.sin_cos();
        let (sb, cb) = a.beta.sin_cos();
        a.frame.t * cb + (a.frame.n * ca + a.frame.b * sa) * sb
    }

    /// Unit ruling direction `ξ(s)`.
    pub fn ruling(&self, s: f64) -> Result<Vec3> {
        Ok(Self::ruling_from(&self.angles(s)?))
    }

    /// Point, normal, conormal, and geodesic curvature at `(s, v)`.
    pub fn geometry(&self, s: f64, v: f64) -> Result<StripGeometry> {
        if !self.contains(s, v) {
            return Err(Error::OutOfDomain { s, v });
        }
        let a = self.angles(s)?;
        let (sa, ca) = a.alpha.sin_cos();
        let point = self.crease.position(s) + Self::ruling_from(&a) * v;
        Ok(StripGeometry {
            point,
            normal: -a.frame.n * sa + a.frame.b * ca,
            conormal: a.frame.n * ca + a.frame.b * sa,
            kappa_g: a.frame.kappa * ca,
        })
    }

    /// Closed-form first fundamental form
    /// `E = (sin β − v(β′ + κ_g))² + cos² β`, `F = cos β`, `G = 1`,
    /// next to the finite-difference metric of the embedding (step `h`).
    pub fn first_fundamental_form(&self, s: f64, v: f64, h: f64) -> Result<MetricComparison> {
        if !self.contains(s, v) {
            return Err(Error::OutOfDomain { s, v });
        }
        let a = self.angles(s)?;
        let beta_p = self.beta_prime(s)?;
        let kappa_g = a.frame.kappa * a.alpha.cos();
        let (sb, cb) = a.beta.sin_cos();
        let e = (sb - v * (beta_p + kappa_g)).powi(2) + cb * cb;
        let closed_form = Metric::new(e, cb, 1.0);
        let measured = measured_metric(&|s: f64, v: f64| self.point_unchecked(s, v), s, v, h);
        Ok(MetricComparison { closed_form, measured })
    }

    /// `c(s) + v ξ(s)` without domain checks; NaN where the frame is undefined.
    pub fn point_unchecked(&self, s: f64, v: f64) -> Vec3 {
        match self.ruling(s) {
            Ok(xi) => self.crease.position(s) + xi * v,
            Err(_) => Vec3::repeat(f64::NAN),
        }
    }

    /// The dual strip: same crease, first angular function negated.
    pub fn dual(&self) -> DevelopableStrip {
        dual_strip(self)
    }
}

impl Surface for DevelopableStrip {
    fn point(&self, s: f64, v: f64) -> Vec3 {
        self.point_unchecked(s, v)
    }
}

pub fn dual_strip(strip: &DevelopableStrip) -> DevelopableStrip {
    let (lo, hi) = strip.v_range;
    DevelopableStrip {
        crease: Arc::clone(&strip.crease),
        alpha: Arc::new(Negated(Arc::clone(&strip.alpha))),
        v_range: (lo, hi),
    }
}

/// A strip on `v ≥ 0` glued to its dual on `v ≤ 0` along the shared crease.
#[derive(Debug, Clone)]
pub struct OrigamiMapRecord {
    pub upper: DevelopableStrip,
    pub lower: DevelopableStrip,
}

impl OrigamiMapRecord {
    pub fn from_upper(upper: DevelopableStrip) -> Self {
        let lower = upper.dual();
        Self { upper, lower }
    }

    pub fn point(&self, s: f64, v: f64) -> Vec3 {
        if v >= 0.0 {
            self.upper.point_unchecked(s, v)
        } else {
            self.lower.point_unchecked(s, v)
        }
    }
}

// ---------------------------------------------------------------------------
// Reference curves

/// Arc-length helix with prescribed curvature and torsion.
#[derive(Debug, Clone, Copy)]
pub struct Helix {
    radius: f64,
    pitch: f64,
    speed: f64,
}

impl Helix {
    pub fn with_curvature_torsion(kappa: f64, tau: f64) -> Self {
        let d = kappa * kappa + tau * tau;
        let (radius, pitch) = (kappa / d, tau / d);
        Self { radius, pitch, speed: (radius * radius + pitch * pitch).sqrt() }
    }
}

impl SpaceCurve for Helix {
    fn domain(&self) -> (f64, f64) {
        (0.0, 2.0)
    }

    fn position(&self, s: f64) -> Vec3 {
        let th = s / self.speed;
        Vec3::new(self.radius * th.cos(), self.radius * th.sin(), self.pitch * th)
    }

    fn d1(&self, s: f64) -> Vec3 {
        let th = s / self.speed;
        Vec3::new(-self.radius * th.sin(), self.radius * th.cos(), self.pitch) / self.speed
    }

    fn d2(&self, s: f64) -> Vec3 {
        let th = s / self.speed;
        Vec3::new(-self.radius * th.cos(), -self.radius * th.sin(), 0.0) / (self.speed * self.speed)
    }

    fn d3(&self, s: f64) -> Option<Vec3> {
        let th = s / self.speed;
        Some(Vec3::new(self.radius * th.sin(), -self.radius * th.cos(), 0.0) / self.speed.powi(3))
    }
}

/// Unit circle in the xy-plane.
#[derive(Debug, Clone, Copy)]
pub struct UnitCircle;

impl SpaceCurve for UnitCircle {
    fn domain(&self) -> (f64, f64) {
        (0.0, std::f64::consts::TAU)
    }

    fn position(&self, s: f64) -> Vec3 {
        Vec3::new(s.cos(), s.sin(), 0.0)
    }

    fn d1(&self, s: f64) -> Vec3 {
        Vec3::new(-s.sin(), s.cos(), 0.0)
    }

    fn d2(&self, s: f64) -> Vec3 {
        Vec3::new(-s.cos(), -s.sin(), 0.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StraightLine {
    pub origin: Vec3,
    pub direction: Vec3,
}

impl SpaceCurve for StraightLine {
    fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn position(&self, s: f64) -> Vec3 {
        self.origin + self.direction.normalize() * s
    }

    fn d1(&self, _s: f64) -> Vec3 {
        self.direction.normalize()
    }

    fn d2(&self, _s: f64) -> Vec3 {
        Vec3::zeros()
    }
}
