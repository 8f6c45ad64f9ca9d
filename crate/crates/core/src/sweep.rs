//! Deformation sweeps over a list of parameters.

use rayon::prelude::*;

use crate::config::Tolerances;
use crate::deformation::{assemble_quarter, deformed_quarter_with, end_depth, Schedule};
use crate::error::{Error, Result};
use crate::io::{SweepTrace, TraceRow};
use crate::profile::FundamentalData;
use crate::verify::{topology_report, Grid};

/// `n` equally spaced values from 0 to 1 inclusive.
pub fn uniform_t(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("a sweep needs at least 2 values, got {n}")));
    }
    Ok((0..n).map(|i| if i + 1 == n { 1.0 } else { i as f64 / (n - 1) as f64 }).collect())
}

/// Builds and inspects every stage; stages run concurrently and rows come
/// back in the order of `t_values`.
pub fn sweep(
    data: &FundamentalData,
    schedule: &Schedule,
    t_values: &[f64],
    grid: Grid,
    tol: &Tolerances,
) -> Result<SweepTrace> {
    let rows = t_values
        .par_iter()
        .map(|&t| {
            let q = deformed_quarter_with(data, schedule, t, tol)?;
            let mesh = assemble_quarter(&q, grid.n_s, grid.n_v, tol)?;
            let r = topology_report(&mesh, tol)?;
            Ok(TraceRow {
                t,
                lambda: q.lambda(),
                mu: q.mu(),
                closed: r.closed,
                euler: r.euler,
                boundary_edges: r.boundary_edges,
                intersections: r.intersections,
                signed_volume: r.signed_volume,
                volume_valid: r.volume_valid,
                depth: end_depth(&q).depth,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTrace { rows })
}
