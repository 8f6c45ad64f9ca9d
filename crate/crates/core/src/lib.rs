//! Pillow boxes as curved foldings.
//!
//! A pillow box is rebuilt from fundamental data `(b, ζ)`: a half-height and
//! an arc-length height profile of its crease. This crate builds the quarter
//! origami parametrization and the full box, develops it onto a double
//! rectangle, generates every crease-preserving isometric deformation toward
//! that rectangle, and checks the resulting geometry numerically
//! (isometry, flatness, planarity, topology, volume).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod deformation;
pub mod development;
pub mod error;
pub mod intersect;
pub mod io;
pub mod kernel;
pub mod mesh;
pub mod pillow;
pub mod profile;
pub mod quadrature;
pub mod suite;
pub mod sweep;
pub mod verify;

pub use config::Tolerances;
pub use deformation::{
    assemble_deformed, deformed_quarter, horizontal_end_depth, pattern_scaling_family, validate_schedule,
    DeformedQuarter, Schedule,
};
pub use development::{developing_map, double_rectangle_mesh, validate_pattern_conditions, CreasePattern};
pub use error::{Error, Result};
pub use kernel::Vec3;
pub use mesh::TriMesh;
pub use pillow::{assemble_box, crease_curve, quarter_parametrization, QuarterMap, QuarterParametrization, StripSide};
pub use profile::{validate_fundamental_data, FundamentalData, ProfileFunction};
pub use verify::{
    check_crease_planarity, check_flatness, check_isometry, enclosed_volume, topology_report, CheckReport, Grid,
    TopologyReport,
};
