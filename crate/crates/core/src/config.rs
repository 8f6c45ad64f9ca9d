use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by construction and verification.
///
/// Every field can be overridden by name through [`Tolerances::set`], which
/// is what the CLI `--tol name=value` flag calls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Boundary conditions `ζ(0) = ζ(L) = 0`.
    pub bc: f64,
    /// Profile round trips through graph conversion.
    pub rt: f64,
    /// Relative endpoint guard: frame-based sampling stays in `[εL, (1−ε)L]`.
    pub eps_endpoint: f64,
    /// Absolute adaptive Simpson tolerance.
    pub quad: f64,
    /// Weld distance as a fraction of the bounding-box diagonal.
    pub weld: f64,
    /// Metric residual threshold for isometry checks.
    pub isometry: f64,
    /// Gaussian curvature threshold for flatness checks.
    pub flatness: f64,
    /// Plane-confinement threshold for creases and ends.
    pub planarity: f64,
    /// Contact tolerance for triangle intersection, relative to the diagonal.
    pub contact: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            bc: 1e-9,
            rt: 1e-6,
            eps_endpoint: 1e-3,
            quad: 1e-10,
            weld: 1e-6,
            isometry: 1e-6,
            flatness: 1e-5,
            planarity: 1e-9,
            contact: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance {name} must be positive, got {value}")));
        }
        let slot = match name {
            "bc" => &mut self.bc,
            "rt" => &mut self.rt,
            "eps_endpoint" | "eps" => &mut self.eps_endpoint,
            "quad" => &mut self.quad,
            "weld" => &mut self.weld,
            "isometry" => &mut self.isometry,
            "flatness" => &mut self.flatness,
            "planarity" => &mut self.planarity,
            "contact" => &mut self.contact,
            other => return Err(Error::InvalidInput(format!("unknown tolerance '{other}'"))),
        };
        *slot = value;
        Ok(())
    }

    /// Parses `name=value`.
    pub fn apply(&mut self, assignment: &str) -> Result<()> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("expected name=value, got '{assignment}'")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad tolerance value in '{assignment}'")))?;
        self.set(name.trim(), value)
    }
}
