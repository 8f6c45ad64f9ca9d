//! File formats: OBJ meshes, SVG crease patterns, JSON inputs and traces.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::deformation::Schedule;
use crate::development::CreasePattern;
use crate::error::{Error, Result};
use crate::kernel::Vec3;
use crate::mesh::TriMesh;
use crate::profile::{FundamentalData, FundamentalDataDescriptor};

/// `x` rounded to 9 significant digits, in the shortest decimal form that
/// reads back to the same double.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { format!("{x}") };
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float");
    format!("{rounded}")
}

pub fn write_obj<W: Write>(mesh: &TriMesh, mut w: W) -> Result<()> {
    let mut out = String::with_capacity(40 * (mesh.vertices.len() + mesh.triangles.len()));
    let _ = writeln!(out, "# {} vertices, {} triangles", mesh.vertices.len(), mesh.triangles.len());
    for p in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", fmt_sig9(p.x), fmt_sig9(p.y), fmt_sig9(p.z));
    }
    for t in &mesh.triangles {
        let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

pub fn export_obj(mesh: &TriMesh, path: impl AsRef<Path>) -> Result<()> {
    write_obj(mesh, fs::File::create(path)?)
}

/// Reads `v` and `f` records; faces with more than three corners are fanned,
/// `a/b/c` corners use the position index, negative indices count back.
pub fn read_obj<R: Read>(r: R) -> Result<TriMesh> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (lineno, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let mut it = line.split_whitespace();
        let bad = |what: &str| Error::InvalidInput(format!("OBJ line {}: {what}", lineno + 1));
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it.take(3).map(|t| t.parse().map_err(|_| bad("bad coordinate"))).collect::<Result<_>>()?;
                if c.len() != 3 {
                    return Err(bad("vertex needs 3 coordinates"));
                }
                vertices.push(Vec3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = it
                    .map(|t| {
                        let i: i64 = t.split('/').next().unwrap_or("").parse().map_err(|_| bad("bad index"))?;
                        let n = vertices.len() as i64;
                        let k = if i > 0 { i - 1 } else { n + i };
                        if i == 0 || k < 0 || k >= n {
                            return Err(bad("index out of range"));
                        }
                        Ok(k as usize)
                    })
                    .collect::<Result<_>>()?;
                if idx.len() < 3 {
                    return Err(bad("face needs 3 corners"));
                }
                for k in 1..idx.len() - 1 {
                    triangles.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    TriMesh::new(vertices, triangles)
}

pub fn import_obj(path: impl AsRef<Path>) -> Result<TriMesh> {
    read_obj(fs::File::open(path)?)
}

/// `γ₁` as `(x, ψ)` samples and its mirror `γ₂ = (x, 2b − ψ)`.
pub fn pattern_polylines(pattern: &CreasePattern, n: usize) -> (Vec<[f64; 2]>, Vec<[f64; 2]>) {
    let two_b = 2.0 * pattern.data().b();
    let g1 = pattern.polyline(n);
    let g2 = g1.iter().map(|&[x, y]| [x, two_b - y]).collect();
    (g1, g2)
}

/// The double-rectangle sheet `[0, 2a] × [0, 2b]` with `γ₁` and `γ₂`, in
/// model coordinates (the group flips the y-axis for display).
pub fn render_svg(pattern: &CreasePattern, n: usize) -> String {
    let (w, h) = (2.0 * pattern.half_width(), 2.0 * pattern.data().b());
    let pad = 0.05 * w.max(h);
    let stroke = 0.004 * w.max(h);
    let (g1, g2) = pattern_polylines(pattern, n);
    let pts = |p: &[[f64; 2]]| p.iter().map(|[x, y]| format!("{},{}", fmt_sig9(*x), fmt_sig9(*y))).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        fmt_sig9(-pad),
        fmt_sig9(-pad),
        fmt_sig9(w + 2.0 * pad),
        fmt_sig9(h + 2.0 * pad)
    );
    let _ = writeln!(s, r#"<g transform="matrix(1 0 0 -1 0 {})" fill="none" stroke-width="{}">"#, fmt_sig9(h), fmt_sig9(stroke));
    let _ = writeln!(s, r#"<rect id="rectangle" x="0" y="0" width="{}" height="{}" stroke="black"/>"#, fmt_sig9(w), fmt_sig9(h));
    let _ = writeln!(s, r#"<polyline id="gamma1" stroke="red" points="{}"/>"#, pts(&g1));
    let _ = writeln!(s, r#"<polyline id="gamma2" stroke="blue" points="{}"/>"#, pts(&g2));
    s.push_str("</g>\n</svg>\n");
    s
}

pub fn export_svg(pattern: &CreasePattern, n: usize, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, render_svg(pattern, n))?;
    Ok(())
}

/// Points of the polyline with the given `id` in an SVG produced by
/// [`render_svg`].
pub fn svg_polyline(svg: &str, id: &str) -> Option<Vec<[f64; 2]>> {
    let tag = format!(r#"id="{id}""#);
    let line = svg.lines().find(|l| l.contains(&tag))?;
    let start = line.find("points=\"")? + 8;
    let end = start + line[start..].find('"')?;
    line[start..end]
        .split_whitespace()
        .map(|p| {
            let (x, y) = p.split_once(',')?;
            Some([x.parse().ok()?, y.parse().ok()?])
        })
        .collect()
}

/// One row of a deformation sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    pub lambda: f64,
    pub mu: f64,
    pub closed: bool,
    pub euler: i64,
    pub boundary_edges: usize,
    pub intersections: usize,
    pub signed_volume: f64,
    pub volume_valid: bool,
    /// Lowest point of the horizontal end.
    pub depth: f64,
}

/// Sweep rows ordered by `t`; serializes as a JSON array.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SweepTrace {
    pub rows: Vec<TraceRow>,
}

pub fn export_trace(trace: &SweepTrace, path: impl AsRef<Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(trace)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// `{"b", "zeta", "schedule"?, "t_values"?}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDocument {
    #[serde(flatten)]
    pub data: FundamentalDataDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_values: Option<Vec<f64>>,
}

impl InputDocument {
    pub fn example() -> Self {
        Self { data: FundamentalDataDescriptor::example(), schedule: None, t_values: None }
    }

    pub fn fundamental_data(&self) -> Result<FundamentalData> {
        self.data.build()
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule.clone().unwrap_or_else(Schedule::linear)
    }
}

pub fn load_input(path: impl AsRef<Path>) -> Result<InputDocument> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
