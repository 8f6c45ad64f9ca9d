use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pillowfold::deformation::{assemble_quarter, deformed_quarter_with, end_depth, pattern_scaling_family};
use pillowfold::development::{double_rectangle_mesh, CreasePattern};
use pillowfold::io::{export_obj, export_svg, export_trace, load_input, InputDocument, SweepTrace, TraceRow};
use pillowfold::pillow::{assemble_box, quarter_parametrization_with};
use pillowfold::suite::{data_checks, full_suite, schedule_checks, stage_checks, topology_checks};
use pillowfold::sweep::uniform_t;
use pillowfold::verify::{topology_report, CheckReport, Grid, TopologyReport};
use pillowfold::{FundamentalData, Schedule, Tolerances};

const FAMILY_T: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 0.95];

#[derive(Parser)]
#[command(name = "pillowfold", version, about = "Pillow boxes, their developments and crease-preserving deformations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Input document `{b, zeta, schedule?, t_values?}`; the built-in example when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Sampling grid, intervals along the crease by intervals across.
    #[arg(long, global = true, default_value = "64x32")]
    grid: Grid,
    /// Relative endpoint guard for frame-based sampling.
    #[arg(long, global = true)]
    eps_endpoint: Option<f64>,
    /// Tolerance override `name=value`, repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Directory for meshes, drawings and traces.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fundamental data, crease pattern and schedule.
    Validate,
    /// Build the pillow box and write `box.obj`.
    Build,
    /// Build the double rectangle and write `rectangle.obj` and `pattern.svg`.
    Develop,
    /// Build deformation stages and write their meshes and `trace.json`.
    Deform {
        /// A single stage.
        #[arg(long, conflicts_with = "sweep")]
        t: Option<f64>,
        /// `n` uniform stages from 0 to 1.
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// Build members of a non-crease-preserving family.
    Family {
        /// Scale the crease pattern vertically by `1 − t`.
        #[arg(long, required = true)]
        pattern_scaling: bool,
        /// A single member; defaults to 0, 0.25, 0.5, 0.75, 0.95.
        #[arg(long)]
        t: Option<f64>,
    },
    /// Run the check suite and print it as JSON.
    Verify {
        /// Include isometry, flatness and structure checks at every stage.
        #[arg(long)]
        all: bool,
    },
}

struct Session {
    doc: InputDocument,
    data: FundamentalData,
    schedule: Schedule,
    grid: Grid,
    tol: Tolerances,
    out: PathBuf,
}

impl Session {
    fn from_global(g: &Global) -> Result<Self> {
        let doc = match &g.input {
            Some(p) => load_input(p).with_context(|| format!("reading {}", p.display()))?,
            None => InputDocument::example(),
        };
        let mut tol = Tolerances::default();
        if let Some(e) = g.eps_endpoint {
            tol.set("eps_endpoint", e)?;
        }
        for a in &g.tol {
            tol.apply(a)?;
        }
        let data = doc.fundamental_data()?;
        let schedule = doc.schedule();
        Ok(Self { data, schedule, doc, grid: g.grid, tol, out: g.out.clone() })
    }

    fn path(&self, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))?;
        Ok(self.out.join(name))
    }

    fn t_values(&self) -> Result<Vec<f64>> {
        match &self.doc.t_values {
            Some(t) => Ok(t.clone()),
            None => Ok(uniform_t(11)?),
        }
    }
}

fn passed(checks: &[CheckReport]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn sphere_check(name: &str, grid: Grid, r: &TopologyReport, count_intersections: bool) -> CheckReport {
    let mut defect = r.boundary_edges + r.nonmanifold_edges + (r.euler - 2).unsigned_abs() as usize;
    if count_intersections {
        defect += r.intersections;
    }
    CheckReport::new(name, grid.to_string(), defect as f64, [0.0, 0.0], 0.5)
}

fn trace_row(t: f64, lambda: f64, mu: f64, depth: f64, r: &TopologyReport) -> TraceRow {
    TraceRow {
        t,
        lambda,
        mu,
        closed: r.closed,
        euler: r.euler,
        boundary_edges: r.boundary_edges,
        intersections: r.intersections,
        signed_volume: r.signed_volume,
        volume_valid: r.volume_valid,
        depth,
    }
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn validate(cx: &Session) -> Result<Value> {
    let mut checks = data_checks(&cx.data, &cx.tol)?;
    checks.extend(schedule_checks(&cx.schedule, &cx.data, &cx.tol)?);
    Ok(json!({ "command": "validate", "pass": passed(&checks), "checks": checks }))
}

fn build(cx: &Session) -> Result<Value> {
    let q = quarter_parametrization_with(&cx.data, &cx.tol)?;
    let mesh = assemble_box(&q, cx.grid.n_s, cx.grid.n_v, &cx.tol)?;
    let r = topology_report(&mesh, &cx.tol)?;
    let path = cx.path("box.obj")?;
    export_obj(&mesh, &path)?;
    let checks = vec![
        sphere_check("sphere", cx.grid, &r, true),
        CheckReport::new("volume_positive", cx.grid.to_string(), -r.signed_volume, [0.0, 0.0], 0.0),
    ];
    Ok(json!({
        "command": "build",
        "grid": cx.grid,
        "mesh": file_name(&path),
        "topology": r,
        "pass": passed(&checks),
        "checks": checks,
    }))
}

fn develop(cx: &Session) -> Result<Value> {
    let pattern = CreasePattern::new(&cx.data, &cx.tol)?;
    let mesh = double_rectangle_mesh(&cx.data, cx.grid.n_s)?;
    let r = topology_report(&mesh, &cx.tol)?;
    let obj = cx.path("rectangle.obj")?;
    let svg = cx.path("pattern.svg")?;
    export_obj(&mesh, &obj)?;
    export_svg(&pattern, cx.grid.n_s, &svg)?;
    let mut checks = data_checks(&cx.data, &cx.tol)?;
    checks.retain(|c| c.check.starts_with("pattern_"));
    checks.push(sphere_check("double_rectangle_sphere", cx.grid, &r, false));
    checks.push(CheckReport::new("double_rectangle_volume", cx.grid.to_string(), r.signed_volume.abs(), [0.0, 0.0], 1e-12));
    Ok(json!({
        "command": "develop",
        "width": 2.0 * pattern.half_width(),
        "height": 2.0 * cx.data.b(),
        "mesh": file_name(&obj),
        "svg": file_name(&svg),
        "topology": r,
        "pass": passed(&checks),
        "checks": checks,
    }))
}

fn deform(cx: &Session, t: Option<f64>, sweep: Option<usize>) -> Result<Value> {
    let ts = match (t, sweep) {
        (Some(t), _) => vec![t],
        (None, Some(n)) => uniform_t(n)?,
        (None, None) => cx.t_values()?,
    };
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut meshes = Vec::new();
    for (i, &t) in ts.iter().enumerate() {
        let q = deformed_quarter_with(&cx.data, &cx.schedule, t, &cx.tol)?;
        let mesh = assemble_quarter(&q, cx.grid.n_s, cx.grid.n_v, &cx.tol)?;
        let r = topology_report(&mesh, &cx.tol)?;
        let path = cx.path(&format!("deform_{i:03}.obj"))?;
        export_obj(&mesh, &path)?;
        meshes.push(file_name(&path));
        rows.push(trace_row(t, q.lambda(), q.mu(), end_depth(&q).depth, &r));
        checks.extend(stage_checks(&q, cx.grid, &cx.tol)?);
    }
    let trace = SweepTrace { rows };
    let trace_path = cx.path("trace.json")?;
    export_trace(&trace, &trace_path)?;
    Ok(json!({
        "command": "deform",
        "grid": cx.grid,
        "meshes": meshes,
        "trace": file_name(&trace_path),
        "rows": trace,
        "pass": passed(&checks),
        "checks": checks,
    }))
}

fn family(cx: &Session, t: Option<f64>) -> Result<Value> {
    let ts = match t {
        Some(t) => vec![t],
        None => FAMILY_T.to_vec(),
    };
    let (width, height) = (2.0 * cx.data.half_width(), 2.0 * cx.data.b());
    let g = cx.grid.to_string();
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut meshes = Vec::new();
    let mut last_volume = f64::INFINITY;
    for (i, &t) in ts.iter().enumerate() {
        let m = pattern_scaling_family(&cx.data, t, cx.grid.n_s, cx.grid.n_v, &cx.tol)?;
        let r = topology_report(&m.mesh, &cx.tol)?;
        let path = cx.path(&format!("family_{i:03}.obj"))?;
        export_obj(&m.mesh, &path)?;
        meshes.push(file_name(&path));
        let w = 2.0 * m.data.half_width();
        checks.push(sphere_check(&format!("sphere@t={t}"), cx.grid, &r, false));
        checks.push(CheckReport::new(format!("rectangle@t={t}"), &g, (w - width).abs(), [t, 0.0], 1e-6));
        if ts.len() > 1 {
            checks.push(CheckReport::new(format!("volume_decrease@t={t}"), &g, r.signed_volume - last_volume, [t, 0.0], 0.0));
        }
        last_volume = r.signed_volume;
        rows.push(json!({ "t": t, "width": w, "height": 2.0 * m.data.b(), "topology": r }));
    }
    let family_path = cx.path("family.json")?;
    write_json(&family_path, &Value::Array(rows.clone()))?;
    Ok(json!({
        "command": "family",
        "kind": "pattern-scaling",
        "width": width,
        "height": height,
        "meshes": meshes,
        "members": rows,
        "pass": passed(&checks),
        "checks": checks,
    }))
}

fn verify(cx: &Session, all: bool) -> Result<Value> {
    let checks = if all {
        full_suite(&cx.data, &cx.schedule, &cx.t_values()?, cx.grid, &cx.tol)?
    } else {
        let mut c = data_checks(&cx.data, &cx.tol)?;
        c.extend(schedule_checks(&cx.schedule, &cx.data, &cx.tol)?);
        c.extend(topology_checks(&cx.data, &cx.schedule, cx.grid, &cx.tol)?);
        c
    };
    Ok(json!({ "command": "verify", "grid": cx.grid, "pass": passed(&checks), "checks": checks }))
}

fn run(cli: &Cli) -> Result<bool> {
    let cx = Session::from_global(&cli.global)?;
    let (name, report) = match &cli.command {
        Command::Validate => ("validate", validate(&cx)?),
        Command::Build => ("build", build(&cx)?),
        Command::Develop => ("develop", develop(&cx)?),
        Command::Deform { t, sweep } => ("deform", deform(&cx, *t, *sweep)?),
        Command::Family { pattern_scaling, t } => {
            if !pattern_scaling {
                bail!("only --pattern-scaling families are available");
            }
            ("family", family(&cx, *t)?)
        }
        Command::Verify { all } => ("verify", verify(&cx, *all)?),
    };
    write_json(&cx.path(&format!("{name}_report.json"))?, &report)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(report["pass"].as_bool().unwrap_or(false))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
