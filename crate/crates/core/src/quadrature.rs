//! Adaptive Simpson quadrature and tabulated cumulative integrals.
//!
//! Crease coordinates are integrals of a speed factor (for instance
//! `x(s) = ∫₀ˢ √(1 − 2ζ′²)`), and the verification code differentiates
//! them numerically. [`CumulativeIntegral`] keeps a coarse table of panel
//! sums and completes each query with a short local integral, so nearby
//! queries share the same table offset and their differences stay accurate
//! far below the table tolerance.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Default absolute tolerance for adaptive Simpson.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Hard cap on the number of panels an adaptive integration may split into.
pub const MAX_PANELS: usize = 1 << 20;
/// Tolerance used for the short local pieces of a cumulative integral.
pub const LOCAL_TOL: f64 = 1e-14;

const MAX_DEPTH: u32 = 60;

pub type Integrand = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

#[derive(Debug, Clone, Copy)]
pub struct SimpsonEstimate {
    pub value: f64,
    pub panels: usize,
    pub converged: bool,
    pub finite: bool,
}

/// Runs adaptive Simpson and always returns the best estimate, flagging
/// whether the tolerance was met within `max_panels`.
pub fn simpson_estimate<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> SimpsonEstimate {
    if a == b {
        return SimpsonEstimate { value: 0.0, panels: 0, converged: true, finite: true };
    }
    if b < a {
        let mut e = simpson_estimate(f, b, a, tol, max_panels);
        e.value = -e.value;
        return e;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let mut finite = fa.is_finite() && fb.is_finite() && fm.is_finite();
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut stack = vec![Panel { a, b, fa, fm, fb, whole, tol, depth: 0 }];
    let mut total = 0.0;
    let mut compensation = 0.0;
    let mut panels = 1usize;
    let mut converged = true;

    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = f(lm);
        let frm = f(rm);
        if !(flm.is_finite() && frm.is_finite()) {
            finite = false;
        }
        let left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
        let right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
        let delta = left + right - p.whole;
        let budget_exhausted = panels + stack.len() >= max_panels;
        if delta.abs() <= 15.0 * p.tol || p.depth >= MAX_DEPTH || budget_exhausted || !finite {
            // at MAX_DEPTH the panel is ~1e-18 of the range; its residual is negligible
            if delta.abs() > 15.0 * p.tol && p.depth < MAX_DEPTH {
                converged = false;
            }
            // Kahan summation: thousands of tiny panels near a singular endpoint
            let term = left + right + delta / 15.0;
            let y = term - compensation;
            let t = total + y;
            compensation = (t - total) - y;
            total = t;
        } else {
            panels += 1;
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
            stack.push(Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
        }
    }
    SimpsonEstimate { value: total, panels, converged: converged && finite, finite }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let e = simpson_estimate(f, a, b, tol, MAX_PANELS);
    if !e.finite {
        return Err(Error::NonFiniteEvaluation { at: 0.5 * (a + b) });
    }
    if !e.converged {
        return Err(Error::QuadratureFailure { a, b, panels: e.panels });
    }
    Ok(e.value)
}

/// `F(s) = ∫ₐˢ f` tabulated on uniform knots, evaluated at arbitrary `s`
/// by adding a local adaptive integral to the nearest knot value.
#[derive(Clone)]
pub struct CumulativeIntegral {
    integrand: Integrand,
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl std::fmt::Debug for CumulativeIntegral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CumulativeIntegral")
            .field("start", &self.start())
            .field("end", &self.end())
            .field("panels", &(self.knots.len() - 1))
            .field("total", &self.total())
            .finish()
    }
}

impl CumulativeIntegral {
    pub fn new(integrand: Integrand, a: f64, b: f64, panels: usize, tol: f64) -> Result<Self> {
        if !(b > a) || panels == 0 {
            return Err(Error::DomainError(format!("empty integration range [{a}, {b}]")));
        }
        let knots: Vec<f64> = (0..=panels)
            .map(|i| if i == panels { b } else { a + (b - a) * i as f64 / panels as f64 })
            .collect();
        let panel_tol = tol / panels as f64;
        let mut values = Vec::with_capacity(panels + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for w in knots.windows(2) {
            acc += adaptive_simpson(&*integrand, w[0], w[1], panel_tol)?;
            values.push(acc);
        }
        Ok(Self { integrand, knots, values })
    }

    pub fn start(&self) -> f64 {
        self.knots[0]
    }

    pub fn end(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    pub fn total(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn integrand(&self, s: f64) -> f64 {
        (self.integrand)(s)
    }

    fn panel_of(&self, s: f64) -> usize {
        let n = self.knots.len() - 1;
        let t = (s - self.start()) / (self.end() - self.start()) * n as f64;
        (t.floor().max(0.0) as usize).min(n - 1)
    }

    /// `∫ₐˢ f`. Values of `s` outside the table are integrated from the
    /// closest end knot.
    pub fn eval(&self, s: f64) -> f64 {
        let k = self.panel_of(s);
        let (lo, hi) = (self.knots[k], self.knots[k + 1]);
        let (base, from) = if s - lo <= hi - s { (self.values[k], lo) } else { (self.values[k + 1], hi) };
        base + simpson_estimate(&*self.integrand, from, s, LOCAL_TOL, MAX_PANELS).value
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }

    /// Solves `F(s) = target` for `s`, assuming a positive integrand.
    pub fn invert(&self, target: f64) -> Result<f64> {
        let total = self.total();
        let scale = total.abs().max(1.0);
        if target <= 0.0 {
            return Ok(self.start());
        }
        if target >= total {
            return Ok(self.end());
        }
        let k = match self.values.partition_point(|&v| v <= target) {
            0 => 0,
            p => (p - 1).min(self.knots.len() - 2),
        };
        let (mut lo, mut hi) = (self.knots[k], self.knots[k + 1]);
        let (vlo, vhi) = (self.values[k], self.values[k + 1]);
        if !(vhi > vlo) {
            return Err(Error::NonMonotone { at: lo });
        }
        let mut x = lo + (target - vlo) / (vhi - vlo) * (hi - lo);
        for _ in 0..100 {
            let r = self.eval(x) - target;
            if r.abs() <= 1e-15 * scale {
                return Ok(x);
            }
            if r > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = (self.integrand)(x);
            let newton = x - r / d;
            x = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
                break;
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 0.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let f = |x: f64| x.cos();
        let a = adaptive_simpson(&f, 0.0, 1.0, 1e-12).unwrap();
        let b = adaptive_simpson(&f, 1.0, 0.0, 1e-12).unwrap();
        assert!((a + b).abs() < 1e-15);
        assert!((a - 1f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn handles_sqrt_endpoint() {
        let v = adaptive_simpson(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn nan_is_reported() {
        let err = adaptive_simpson(&|x: f64| (x - 0.5).ln(), 0.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::NonFiniteEvaluation { .. }));
    }

    #[test]
    fn panel_cap_is_enforced() {
        let e = simpson_estimate(&|x: f64| (50.0 / x).sin(), 1e-3, 1.0, 1e-15, 64);
        assert!(!e.converged);
        assert!(e.panels <= 64);
    }

    #[test]
    fn cumulative_matches_closed_form_and_inverts() {
        let ci = CumulativeIntegral::new(Arc::new(|s: f64| 1.0 + s * s), 0.0, 2.0, 32, 1e-12).unwrap();
        for &s in &[0.0, 0.013, 0.5, 1.0, 1.77, 2.0] {
            let exact = s + s * s * s / 3.0;
            assert!((ci.eval(s) - exact).abs() < 1e-13, "s = {s}");
            assert!((ci.invert(exact).unwrap() - s).abs() < 1e-13);
        }
        assert!(ci.is_strictly_increasing());
    }
}
