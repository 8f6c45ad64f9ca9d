//! The full check suite behind `verify --all`, as a flat list of
//! [`CheckReport`]s.
//!
//! Margin-style conditions (positive means satisfied) are reported with
//! `worst = −margin` and threshold 0.

use crate::config::Tolerances;
use crate::deformation::{assemble_quarter, deformed_quarter_with, validate_schedule, DeformedQuarter, Schedule};
use crate::development::{double_rectangle_mesh, CreasePattern};
use crate::error::Result;
use crate::pillow::{QuarterMap, StripSide};
use crate::profile::{validate_fundamental_data, FundamentalData, ValidationReport};
use crate::verify::{
    check_crease_planarity, check_strip_flatness, check_strip_isometry, topology_report, CheckReport, Grid,
};
use crate::development::validate_pattern_conditions;

const CONDITION_SAMPLES: usize = 256;

fn margins(prefix: &str, report: &ValidationReport) -> Vec<CheckReport> {
    report
        .conditions
        .iter()
        .map(|c| CheckReport::new(format!("{prefix}_{}", c.name), "-", -c.margin, [c.at, 0.0], 0.0))
        .collect()
}

/// Fundamental-data and crease-pattern conditions.
pub fn data_checks(data: &FundamentalData, tol: &Tolerances) -> Result<Vec<CheckReport>> {
    let mut out = margins("data", &validate_fundamental_data(data.b(), data.zeta(), CONDITION_SAMPLES, tol)?);
    let pattern = CreasePattern::new(data, tol)?;
    out.extend(margins("pattern", &validate_pattern_conditions(&pattern.graph(), data.b(), CONDITION_SAMPLES, tol)?));
    Ok(out)
}

pub fn schedule_checks(schedule: &Schedule, data: &FundamentalData, tol: &Tolerances) -> Result<Vec<CheckReport>> {
    Ok(margins("schedule", &validate_schedule(schedule, data, 21, CONDITION_SAMPLES, tol)?))
}

fn label(name: &str, t: f64) -> String {
    format!("{name}@t={t}")
}

/// Isometry, flatness and the structural identities of one stage.
pub fn stage_checks(q: &DeformedQuarter, grid: Grid, tol: &Tolerances) -> Result<Vec<CheckReport>> {
    let t = q.t();
    let data = q.data();
    let lambda = q.lambda();
    let g = grid.to_string();
    let mut out = Vec::new();
    for side in StripSide::BOTH {
        let mut r = check_strip_isometry(q, side, grid, tol)?;
        r.check = label(&r.check, t);
        out.push(r);
        let mut r = check_strip_flatness(q, side, grid, tol)?;
        r.check = label(&r.check, t);
        out.push(r);
    }

    let n = grid.n_s.max(4);
    let len = data.length();
    let ss: Vec<f64> = (0..=n).map(|i| if i == n { len } else { len * i as f64 / n as f64 }).collect();
    let worst = |f: &dyn Fn(f64) -> f64| {
        ss.iter().map(|&s| (f(s), s)).fold((0.0f64, 0.0), |a, m| if m.0 > a.0 { m } else { a })
    };
    let (w, at) = worst(&|s| (q.crease_point(s).y - data.zeta().value(s)).abs());
    out.push(CheckReport::new(label("crease_height", t), &g, w, [at, 0.0], tol.planarity));
    let (w, at) = worst(&|s| {
        let c = q.crease_point(s);
        (c.z - lambda * c.y).abs()
    });
    out.push(CheckReport::new(label("crease_plane", t), &g, w, [at, 0.0], tol.planarity));
    let (w, at) = worst(&|s| (q.vertical_end(s).y - data.b()).abs());
    out.push(CheckReport::new(label("vertical_end_plane", t), &g, w, [at, data.zeta().value(at) - data.b()], tol.planarity));
    let (w, at) = [0.0, len]
        .iter()
        .map(|&s| {
            let c = q.crease_point(s);
            (c.y.hypot(c.z), s)
        })
        .fold((0.0f64, 0.0), |a, m| if m.0 > a.0 { m } else { a });
    out.push(CheckReport::new(label("crease_endpoints", t), &g, w, [at, 0.0], tol.planarity));
    out.push(CheckReport::new(label("ruling_norm", t), "-", (q.xi().norm() - 1.0).abs(), [0.0, 0.0], 1e-12));

    let samples: Vec<_> = ss[1..n].iter().map(|&s| q.crease_point(s)).collect();
    let fit = check_crease_planarity(&samples)?;
    out.push(CheckReport::new(label("crease_plane_fit", t), &g, (fit.lambda - lambda).abs(), [0.0, 0.0], 1e-8));
    Ok(out)
}

/// Closed sphere checks at both ends of the deformation and for the double
/// rectangle.
pub fn topology_checks(data: &FundamentalData, schedule: &Schedule, grid: Grid, tol: &Tolerances) -> Result<Vec<CheckReport>> {
    let g = grid.to_string();
    let mut out = Vec::new();
    for t in [0.0, 1.0] {
        let q = deformed_quarter_with(data, schedule, t, tol)?;
        let r = topology_report(&assemble_quarter(&q, grid.n_s, grid.n_v, tol)?, tol)?;
        let defect = r.boundary_edges + r.nonmanifold_edges + r.intersections + (r.euler - 2).unsigned_abs() as usize;
        out.push(CheckReport::new(label("sphere", t), &g, defect as f64, [t, 0.0], 0.5));
        if t == 0.0 {
            out.push(CheckReport::new("volume_positive@t=0", &g, -r.signed_volume, [t, 0.0], 0.0));
        } else {
            out.push(CheckReport::new("volume_zero@t=1", &g, r.signed_volume.abs(), [t, 0.0], 1e-12));
        }
    }
    let r = topology_report(&double_rectangle_mesh(data, grid.n_s)?, tol)?;
    let defect = r.boundary_edges + r.nonmanifold_edges + (r.euler - 2).unsigned_abs() as usize;
    out.push(CheckReport::new("double_rectangle_sphere", &g, defect as f64, [0.0, 0.0], 0.5));
    Ok(out)
}

/// Everything: data, schedule, each stage at `t_values`, and topology.
pub fn full_suite(
    data: &FundamentalData,
    schedule: &Schedule,
    t_values: &[f64],
    grid: Grid,
    tol: &Tolerances,
) -> Result<Vec<CheckReport>> {
    let mut out = data_checks(data, tol)?;
    out.extend(schedule_checks(schedule, data, tol)?);
    for &t in t_values {
        let q = deformed_quarter_with(data, schedule, t, tol)?;
        out.extend(stage_checks(&q, grid, tol)?);
    }
    out.extend(topology_checks(data, schedule, grid, tol)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_passes_at_a_coarse_grid() {
        let data = FundamentalData::example();
        let r = full_suite(&data, &Schedule::linear(), &[0.0, 0.5, 1.0], Grid::new(16, 8), &Tolerances::default())
            .unwrap();
        let failed: Vec<_> = r.iter().filter(|c| !c.pass).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(r.iter().any(|c| c.check == "isometry_upper@t=0.5"));
    }

    #[test]
    fn short_half_height_fails_data_checks() {
        let data = FundamentalData::new(0.3, FundamentalData::example().zeta().clone()).unwrap();
        let r = data_checks(&data, &Tolerances::default()).unwrap();
        assert!(r.iter().any(|c| c.check == "data_below_b" && !c.pass));
        assert!(r.iter().any(|c| c.check == "pattern_inside" && !c.pass));
    }
}
