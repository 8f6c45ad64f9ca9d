//! The quarter domain of a pillow box as an origami map, and the full box
//! as four reflected copies.
//!
//! The crease is `c(s) = (∫₀ˢ σ, ζ(s), ζ(s))` with `σ = √(1 − 2ζ′²)`. The
//! strip on `0 ≤ v ≤ ζ(s)` is ruled by `(0, 0, −1)` (the vertical wall
//! `y = ζ`), the strip on `ζ(s) − b ≤ v ≤ 0` by `(0, −1, 0)` (the roof
//! `z = ζ`).

use std::sync::Arc;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::kernel::{AngleFunction, DevelopableStrip, SpaceCurve, Surface, Vec3};
use crate::mesh::{assemble_reflected, sample_and_triangulate, AssemblyMode, TriMesh};
use crate::profile::{FundamentalData, ProfileFunction};
use crate::quadrature::CumulativeIntegral;

/// Speed factors below this make crease frames meaningless.
pub const SIGMA_MIN: f64 = 1e-6;

pub(crate) const CREASE_PANELS: usize = 512;

/// A parametrized quarter `X : U → R³` glued from two ruled strips along a
/// crease, on `U = {0 ≤ s ≤ L, ζ(s) − b ≤ v ≤ ζ(s)}`.
pub trait QuarterMap: Sync {
    fn data(&self) -> &FundamentalData;
    fn crease_point(&self, s: f64) -> Vec3;
    /// Ruling of the `v ≥ 0` strip.
    fn upper_ruling(&self, s: f64) -> Vec3;
    /// Ruling of the `v ≤ 0` strip.
    fn lower_ruling(&self, s: f64) -> Vec3;

    fn point(&self, s: f64, v: f64) -> Vec3 {
        let xi = if v >= 0.0 { self.upper_ruling(s) } else { self.lower_ruling(s) };
        self.crease_point(s) + xi * v
    }

    /// `(ζ(s) − b, ζ(s))`.
    fn v_bounds(&self, s: f64) -> (f64, f64) {
        let z = self.data().zeta().value(s);
        (z - self.data().b(), z)
    }

    fn strip(&self, side: StripSide) -> StripView<'_, Self>
    where
        Self: Sized,
    {
        StripView { map: self, side }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StripSide {
    Upper,
    Lower,
}

impl StripSide {
    pub const BOTH: [StripSide; 2] = [StripSide::Upper, StripSide::Lower];

    /// The strip's part of `U` at `s`.
    pub fn v_range(self, bounds: (f64, f64)) -> (f64, f64) {
        match self {
            StripSide::Upper => (0.0, bounds.1),
            StripSide::Lower => (bounds.0, 0.0),
        }
    }
}

/// One strip of a quarter, extended linearly past `v = 0` so finite
/// differences never straddle the fold.
#[derive(Clone, Copy)]
pub struct StripView<'a, Q: ?Sized> {
    map: &'a Q,
    side: StripSide,
}

impl<Q: QuarterMap + ?Sized> StripView<'_, Q> {
    pub fn side(&self) -> StripSide {
        self.side
    }
}

impl<Q: QuarterMap + ?Sized> Surface for StripView<'_, Q> {
    fn point(&self, s: f64, v: f64) -> Vec3 {
        let xi = match self.side {
            StripSide::Upper => self.map.upper_ruling(s),
            StripSide::Lower => self.map.lower_ruling(s),
        };
        self.map.crease_point(s) + xi * v
    }
}

/// `c(s) = (∫₀ˢ √(1 − 2ζ′²), ζ, ζ)`.
#[derive(Debug, Clone)]
pub struct PillowCrease {
    zeta: ProfileFunction,
    x: CumulativeIntegral,
}

impl PillowCrease {
    pub fn new(zeta: ProfileFunction, tol: f64) -> Result<Self> {
        let z = zeta.clone();
        let sigma = Arc::new(move |s: f64| z.speed_factor(s, 2.0));
        let x = CumulativeIntegral::new(sigma, 0.0, zeta.domain_end(), CREASE_PANELS, tol)?;
        Ok(Self { zeta, x })
    }

    pub fn sigma(&self, s: f64) -> f64 {
        self.zeta.speed_factor(s, 2.0)
    }

    /// Length of the x-interval covered by the crease, `d = ∫₀ᴸ σ`.
    pub fn x_extent(&self) -> f64 {
        self.x.total()
    }
}

impl SpaceCurve for PillowCrease {
    fn domain(&self) -> (f64, f64) {
        (0.0, self.zeta.domain_end())
    }

    fn position(&self, s: f64) -> Vec3 {
        let z = self.zeta.value(s);
        Vec3::new(self.x.eval(s), z, z)
    }

    fn d1(&self, s: f64) -> Vec3 {
        let dz = self.zeta.d1(s);
        Vec3::new(self.sigma(s), dz, dz)
    }

    fn d2(&self, s: f64) -> Vec3 {
        let [_, dz, ddz] = self.zeta.jet(s);
        Vec3::new(-2.0 * dz * ddz / self.sigma(s), ddz, ddz)
    }

    fn d3(&self, s: f64) -> Option<Vec3> {
        let [_, dz, ddz] = self.zeta.jet(s);
        let dddz = self.zeta.d3(s)?;
        let sg = self.sigma(s);
        let dds = -2.0 * (ddz * ddz + dz * dddz) / sg - 4.0 * dz * dz * ddz * ddz / (sg * sg * sg);
        Some(Vec3::new(dds, dddz, dddz))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CreaseSample {
    pub point: Vec3,
    pub tangent: Vec3,
    pub second: Vec3,
    pub sigma: f64,
}

/// The crease point and derivatives at `s`, refusing the corner
/// neighbourhoods where `σ` vanishes.
pub fn crease_curve(data: &FundamentalData, s: f64) -> Result<CreaseSample> {
    let crease = PillowCrease::new(data.zeta().clone(), Tolerances::default().quad)?;
    crease_sample(&crease, s)
}

pub fn crease_sample(crease: &PillowCrease, s: f64) -> Result<CreaseSample> {
    let sigma = crease.sigma(s);
    if !(sigma >= SIGMA_MIN) {
        return Err(Error::EndpointSingularity { at: s, sigma });
    }
    Ok(CreaseSample { point: crease.position(s), tangent: crease.d1(s), second: crease.d2(s), sigma })
}

/// `α(s) = arctan(1/σ(s))` for the wall strip.
struct PillowAlpha(ProfileFunction);

impl AngleFunction for PillowAlpha {
    fn value(&self, s: f64) -> f64 {
        (1.0 / self.0.speed_factor(s, 2.0)).atan()
    }

    fn derivative(&self, s: f64) -> f64 {
        // α′ = −σ′/(1 + σ²), σ′ = −2ζ′ζ″/σ
        let [_, dz, ddz] = self.0.jet(s);
        let sg = self.0.speed_factor(s, 2.0);
        (2.0 * dz * ddz / sg) / (1.0 + sg * sg)
    }
}

/// The origami parametrization of a quarter domain.
#[derive(Debug, Clone)]
pub struct QuarterParametrization {
    data: FundamentalData,
    crease: Arc<PillowCrease>,
}

pub const UPPER_RULING: Vec3 = Vec3::new(0.0, 0.0, -1.0);
pub const LOWER_RULING: Vec3 = Vec3::new(0.0, -1.0, 0.0);

impl QuarterParametrization {
    pub fn crease(&self) -> &Arc<PillowCrease> {
        &self.crease
    }

    /// First angular function of the `v ≥ 0` strip.
    pub fn alpha(&self, s: f64) -> f64 {
        (1.0 / self.crease.sigma(s)).atan()
    }

    /// Shared second angular function, `cos β = −ζ′`.
    pub fn beta(&self, s: f64) -> f64 {
        (-self.data.zeta().d1(s)).acos()
    }

    /// The wall strip as a general developable strip along the crease; its
    /// dual is the roof strip.
    pub fn upper_strip(&self) -> Result<DevelopableStrip> {
        let b = self.data.b();
        DevelopableStrip::new(
            self.crease.clone(),
            Arc::new(PillowAlpha(self.data.zeta().clone())),
            (-b, b),
        )
    }
}

impl QuarterMap for QuarterParametrization {
    fn data(&self) -> &FundamentalData {
        &self.data
    }

    fn crease_point(&self, s: f64) -> Vec3 {
        self.crease.position(s)
    }

    fn upper_ruling(&self, _s: f64) -> Vec3 {
        UPPER_RULING
    }

    fn lower_ruling(&self, _s: f64) -> Vec3 {
        LOWER_RULING
    }
}

pub fn quarter_parametrization(data: &FundamentalData) -> Result<QuarterParametrization> {
    quarter_parametrization_with(data, &Tolerances::default())
}

pub fn quarter_parametrization_with(data: &FundamentalData, tol: &Tolerances) -> Result<QuarterParametrization> {
    let crease = Arc::new(PillowCrease::new(data.zeta().clone(), tol.quad)?);
    Ok(QuarterParametrization { data: data.clone(), crease })
}

/// Welded mesh of `P ∪ ρ_V(P) ∪ ρ_H(P) ∪ ρ_H ρ_V(P)`.
pub fn assemble_box(quarter: &QuarterParametrization, n_s: usize, n_v: usize, tol: &Tolerances) -> Result<TriMesh> {
    let piece = sample_and_triangulate(quarter, n_s, n_v, tol)?;
    assemble_reflected(&piece, quarter.data().b(), tol, AssemblyMode::RequireClosed)
}


#[cfg(test)]
mod assembly_tests {
    use super::*;

    #[test]
    fn box_is_a_closed_sphere() {
        let q = quarter_parametrization(&FundamentalData::example()).unwrap();
        let tol = Tolerances::default();
        for &(ns, nv) in &[(2, 2), (8, 4), (64, 32), (128, 64)] {
            let m = assemble_box(&q, ns, nv, &tol).unwrap();
            assert!(m.is_closed(), "{ns}x{nv}");
            assert_eq!(m.euler_characteristic(), 2, "{ns}x{nv}");
            assert!(m.orientation_conflict().is_none());
            let (lo, hi) = m.bounding_box().unwrap();
            let ext = hi - lo;
            let v = m.signed_volume_raw();
            assert!(v > 0.0 && v < ext.x * ext.y * ext.z, "{ns}x{nv}: {v}");
        }
        assert!(assemble_box(&q, 1, 4, &tol).is_err());
    }
}
