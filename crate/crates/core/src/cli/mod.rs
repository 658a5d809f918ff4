//! Command-line front end: `curvature`, `generate`, `verify` and `surfaces`.

pub mod config;
pub mod export;
pub mod registry;
pub mod verify;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use crate::cylindrical::{solve_generating_curve, CylinderSpec};
use crate::error::Error;
use crate::geom::{Patch, Rect};
use crate::graph_pde::{GraphFunction, GraphSurface, SeparableSolution};
use crate::profile::ProfileCurve;
use crate::rotational::{axis_orthogonal_profile, AxisBranch, GraphPoint, RotationalSurface};
use crate::snm::CanonicalConnection;
use crate::vec3::Vec3;

use config::Config;
use export::{linspace, CurveRow, Mesh};

#[derive(Debug, Parser)]
#[command(name = "snm-surfaces", version, about = "Sectional curvature of surfaces under the canonical snm connection")]
pub struct Cli {
    /// TOML file whose keys mirror the flags; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample K and its ingredients over a named surface.
    Curvature(CurvatureArgs),
    /// Mesh a constant-curvature family and write its generating curve.
    Generate(GenerateArgs),
    /// Run verification suites and print a JSON report.
    Verify(VerifyArgs),
    /// List the named surfaces and their parameters.
    Surfaces,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[arg(long)]
    pub surface: Option<String>,
    /// Surface parameter override, `key=value`; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub param: Vec<String>,
    /// Defining field, `a,b,c` (normalized); default `0,0,1`.
    #[arg(long = "C", value_name = "A,B,C", allow_hyphen_values = true)]
    pub c_field: Option<String>,
    /// Grid size `NxM`; default `10x10`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `csv` (default) or `json`.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// `cylindrical`, `rotational` or `graph`.
    #[arg(long)]
    pub family: Option<String>,
    /// Target curvature (cylindrical; rotational accepts only 0.5).
    #[arg(long = "K", allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Graph parameter c.
    #[arg(long = "c", allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Axis branch of the rotational family: `plus` or `minus` (default).
    #[arg(long)]
    pub branch: Option<String>,
    /// Largest distance from the axis for the rotational family; default 1.5.
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Grid size `NxM`; default `40x40`.
    #[arg(long)]
    pub grid: Option<String>,
    /// OBJ path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Curve CSV path; defaults to the OBJ path with extension `curve.csv`.
    #[arg(long)]
    pub curve_out: Option<PathBuf>,
    /// Only `obj`.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite id or `all`.
    pub suite: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `NxM` with both sides at least 2.
pub fn parse_grid(text: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = text.split_once(['x', 'X']).ok_or_else(|| anyhow!("grid must look like NxM, got {text:?}"))?;
    let n: usize = a.trim().parse().with_context(|| format!("bad grid {text:?}"))?;
    let m: usize = b.trim().parse().with_context(|| format!("bad grid {text:?}"))?;
    if n < 2 || m < 2 {
        bail!("grid sides must be at least 2, got {n}x{m}");
    }
    Ok((n, m))
}

/// Parses `a,b,c` into a normalized field.
pub fn parse_field(text: &str) -> anyhow::Result<CanonicalConnection> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad vector {text:?}"))?;
    let [a, b, c] = parts[..] else {
        bail!("C needs three components, got {text:?}");
    };
    Ok(CanonicalConnection::new(Vec3::new(a, b, c))?)
}

pub fn parse_params(items: &[String]) -> anyhow::Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| anyhow!("parameter must be key=value, got {item:?}"))?;
        let v: f64 = v.trim().parse().with_context(|| format!("bad value in {item:?}"))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn open_out(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Runs a parsed command line. `Ok(false)` means a verification check failed.
pub fn run(cli: Cli) -> anyhow::Result<bool> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Curvature(a) => curvature(a, cfg).map(|_| true),
        Command::Generate(a) => generate(a, cfg).map(|_| true),
        Command::Verify(a) => verify_cmd(a, cfg),
        Command::Surfaces => {
            let mut out = io::stdout().lock();
            for e in registry::REGISTRY {
                let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "{:<20} {:<40} {}", e.name, params.join(" "), e.description)?;
            }
            Ok(true)
        }
    }
}

fn curvature(a: CurvatureArgs, cfg: Config) -> anyhow::Result<()> {
    let name = a.surface.or(cfg.surface).ok_or_else(|| anyhow!("--surface is required"))?;
    let mut params = parse_params(&cfg.param.unwrap_or_default())?;
    params.extend(parse_params(&a.param)?);
    let conn = parse_field(a.c_field.or(cfg.c_field).as_deref().unwrap_or("0,0,1"))?;
    let (n_s, n_t) = parse_grid(a.grid.or(cfg.grid).as_deref().unwrap_or("10x10"))?;
    let format = a.format.or(cfg.format).unwrap_or_else(|| "csv".into());
    let built = registry::build(&registry::SurfaceSpec { name, params })?;
    let rows = export::sample_curvature(built.patch.as_ref(), built.sampling, n_s, n_t, &conn);
    let mut out = open_out(a.out.or(cfg.out).as_deref())?;
    match format.as_str() {
        "csv" => export::write_curvature_csv(&mut out, &rows)?,
        "json" => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
        other => bail!("curvature writes csv or json, not {other:?}"),
    }
    out.flush()?;
    Ok(())
}

/// A generated surface: mesh patch, sampling rectangle and curve samples.
pub struct Generated {
    pub patch: Box<dyn Patch>,
    pub sampling: Rect,
    pub curve: Vec<CurveRow>,
}

/// Builds one of the generated families; `n_curve` is the number of curve samples.
pub fn generate_family(
    family: &str,
    k: Option<f64>,
    c: Option<f64>,
    branch: AxisBranch,
    x_max: f64,
    n_curve: usize,
) -> crate::Result<Generated> {
    match family {
        "cylindrical" => {
            let curve = solve_generating_curve(k.unwrap_or(1.0))?;
            let (lo, hi) = registry::curve_sampling(&curve);
            let rows = linspace(lo, hi, n_curve)
                .into_iter()
                .map(|s| curve.eval(s).map(|p| CurveRow::from_profile(s, &p)))
                .collect::<crate::Result<_>>()?;
            Ok(Generated { patch: Box::new(CylinderSpec::standard(curve)), sampling: Rect::new((lo, hi), (-1.0, 1.0)), curve: rows })
        }
        "rotational" => {
            if let Some(k) = k.filter(|k| *k != 0.5) {
                return Err(Error::InvalidParameter(format!(
                    "the rotational family meets the axis orthogonally only for K = 0.5, got {k}"
                )));
            }
            let prof = axis_orthogonal_profile(branch, x_max)?;
            let len = prof.arc_length();
            let rows = linspace(0.0, len, n_curve)
                .into_iter()
                .map(|s| prof.eval(s).map(|p| CurveRow::from_profile(s, &p)))
                .collect::<crate::Result<_>>()?;
            Ok(Generated {
                patch: Box::new(RotationalSurface::new(prof)),
                sampling: Rect::new((0.0, len), (-std::f64::consts::PI, std::f64::consts::PI)),
                curve: rows,
            })
        }
        "graph" => {
            let g = SeparableSolution::new(c.unwrap_or(1.0))?;
            // 1.4 / |c| by 1.4 / |k|: the (-1.4, 1.4)^2 square for c = 1
            let (hx, hy) = (1.4 / g.c().abs(), 1.4 / g.k().abs());
            let rows = linspace(-hx, hx, n_curve)
                .into_iter()
                .map(|x| {
                    let d = g.derivatives(x, 0.0)?;
                    let p = GraphPoint { x, z: d.u, zp: d.ux, zpp: d.uxx }.to_profile_point();
                    Ok(CurveRow { s: x, x, z: d.u, z_prime: d.ux, kappa: p.curvature() })
                })
                .collect::<crate::Result<_>>()?;
            Ok(Generated { patch: Box::new(GraphSurface::new(g)), sampling: Rect::new((-hx, hx), (-hy, hy)), curve: rows })
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown family {other:?} (expected cylindrical, rotational or graph)"
        ))),
    }
}

fn generate(a: GenerateArgs, cfg: Config) -> anyhow::Result<()> {
    let family = a.family.or(cfg.family).ok_or_else(|| anyhow!("--family is required"))?;
    let branch: AxisBranch = a.branch.or(cfg.branch).as_deref().unwrap_or("minus").parse()?;
    let x_max = a.x_max.or(cfg.x_max).unwrap_or(1.5);
    let (n_s, n_t) = parse_grid(a.grid.or(cfg.grid).as_deref().unwrap_or("40x40"))?;
    let format = a.format.or(cfg.format).unwrap_or_else(|| "obj".into());
    if format != "obj" {
        bail!("generate writes obj, not {format:?}");
    }
    let g = generate_family(&family, a.k.or(cfg.k), a.c.or(cfg.c), branch, x_max, n_s)?;
    let mesh = Mesh::sample(g.patch.as_ref(), g.sampling, n_s, n_t);
    if !mesh.is_finite() {
        bail!("mesh of {family} has non-finite vertices");
    }
    let out_path = a.out.or(cfg.out);
    let mut out = open_out(out_path.as_deref())?;
    mesh.write_obj(&mut out)?;
    out.flush()?;
    let curve_path = a.curve_out.or(cfg.curve_out).or_else(|| out_path.map(|p| p.with_extension("curve.csv")));
    if let Some(p) = curve_path {
        let mut w = open_out(Some(&p))?;
        export::write_curve_csv(&mut w, &g.curve)?;
        w.flush()?;
    }
    Ok(())
}

fn verify_cmd(a: VerifyArgs, cfg: Config) -> anyhow::Result<bool> {
    let suite = a.suite.or(cfg.suite).unwrap_or_else(|| "all".into());
    let seed = a.seed.or(cfg.seed).unwrap_or(42);
    let start = Instant::now();
    let reports = verify::run(&suite, seed)?;
    let mut out = open_out(a.out.or(cfg.out).as_deref())?;
    serde_json::to_writer_pretty(&mut out, &reports)?;
    writeln!(out)?;
    out.flush()?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    eprintln!(
        "{} checks, {} failed, {:.2} s",
        reports.len(),
        failed,
        start.elapsed().as_secs_f64()
    );
    for r in reports.iter().filter(|r| !r.passed()) {
        eprintln!("FAIL {} [{}]", r.check, r.anchor);
    }
    Ok(failed == 0)
}
