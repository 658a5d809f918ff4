//! Named surfaces with real-valued constructor parameters.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cylindrical::{solve_generating_curve, CylinderSpec};
use crate::error::{Error, Result};
use crate::geom::{Patch, PlanePatch, Rect, SpherePatch};
use crate::graph_pde::{GraphSurface, Paraboloid, SeparableSolution};
use crate::profile::{AnalyticProfile, ProfileCurve};
use crate::rotational::{axis_orthogonal_profile, AxisBranch, RotationalSurface};

/// A registry name plus parameter overrides; this is also the config-file form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl SurfaceSpec {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

/// Resolved parameters: defaults overlaid with the spec's values.
#[derive(Debug, Clone)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn get(&self, key: &str) -> f64 {
        self.0[key]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// A surface ready for sampling over a finite parameter rectangle.
pub struct BuiltSurface {
    pub patch: Box<dyn Patch>,
    pub sampling: Rect,
}

pub struct SurfaceEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub params: &'static [(&'static str, f64)],
    build: fn(&Params) -> Result<BuiltSurface>,
}

impl SurfaceEntry {
    pub fn resolve(&self, overrides: &BTreeMap<String, f64>) -> Result<Params> {
        let mut out: BTreeMap<String, f64> = self.params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, v) in overrides {
            if !out.contains_key(k) {
                let known: Vec<&str> = self.params.iter().map(|p| p.0).collect();
                return Err(Error::InvalidParameter(format!(
                    "surface {} has no parameter {k:?} (known: {})",
                    self.name,
                    known.join(", ")
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("parameter {k} must be finite")));
            }
            out.insert(k.clone(), *v);
        }
        Ok(Params(out))
    }

    pub fn build(&self, overrides: &BTreeMap<String, f64>) -> Result<BuiltSurface> {
        (self.build)(&self.resolve(overrides)?)
    }
}

fn positive(p: &Params, key: &str) -> Result<f64> {
    let v = p.get(key);
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{key} must be positive, got {v}")))
    }
}

fn rotational<C: ProfileCurve + 'static>(profile: C, s: (f64, f64)) -> BuiltSurface {
    BuiltSurface { patch: Box::new(RotationalSurface::new(profile)), sampling: Rect::new(s, (-PI, PI)) }
}

fn plane(p: &Params) -> Result<BuiltSurface> {
    Ok(BuiltSurface {
        patch: Box::new(PlanePatch::horizontal(p.get("height"))),
        sampling: Rect::new((-1.0, 1.0), (-1.0, 1.0)),
    })
}

fn sphere(p: &Params) -> Result<BuiltSurface> {
    Ok(BuiltSurface {
        patch: Box::new(SpherePatch { radius: positive(p, "radius")? }),
        sampling: Rect::new((0.0, PI), (-PI, PI)),
    })
}

fn cylinder(p: &Params) -> Result<BuiltSurface> {
    Ok(rotational(AnalyticProfile::vertical_line(positive(p, "radius")?), (-1.0, 1.0)))
}

fn catenoid(p: &Params) -> Result<BuiltSurface> {
    Ok(rotational(AnalyticProfile::Catenary { a: positive(p, "a")?, z0: 0.0 }, (-1.0, 1.0)))
}

fn cone(p: &Params) -> Result<BuiltSurface> {
    let half = positive(p, "half_length")?;
    let line = AnalyticProfile::Line { c1: p.get("c1"), c2: p.get("c2"), theta: p.get("theta") };
    Ok(rotational(line, (-half, half)))
}

fn torus(p: &Params) -> Result<BuiltSurface> {
    let r = positive(p, "r")?;
    let c1 = p.get("c1");
    if c1 <= r {
        return Err(Error::CircleTouchesAxis { r, c1 });
    }
    Ok(rotational(AnalyticProfile::Circle { c1, c2: 0.0, r, phase: 0.0 }, (-PI * r, PI * r)))
}

fn grim_reaper(p: &Params) -> Result<BuiltSurface> {
    let half = positive(p, "half_width")?;
    Ok(BuiltSurface {
        patch: Box::new(CylinderSpec::standard(AnalyticProfile::GrimReaper { offset: 0.0 })),
        sampling: Rect::new((-half, half), (-1.0, 1.0)),
    })
}

fn generating_cylinder(p: &Params) -> Result<BuiltSurface> {
    let curve = solve_generating_curve(p.get("K"))?;
    let (lo, hi) = curve_sampling(&curve);
    Ok(BuiltSurface { patch: Box::new(CylinderSpec::standard(curve)), sampling: Rect::new((lo, hi), (-1.0, 1.0)) })
}

/// Finite sampling window of a generating curve: at most two units either side
/// of the anchor, kept `1e-3` inside finite domain ends.
pub fn curve_sampling(curve: &crate::cylindrical::GeneratingCurve) -> (f64, f64) {
    let d = curve.domain();
    let a = curve.anchor();
    let lo = if d.lo.is_finite() { d.lo + 1e-3 } else { a - 2.0 };
    let hi = if d.hi.is_finite() { d.hi - 1e-3 } else { a + 2.0 };
    (lo.max(a - 2.0), hi.min(a + 2.0))
}

fn separable_graph(p: &Params) -> Result<BuiltSurface> {
    let g = SeparableSolution::new(p.get("c"))?;
    let frac = p.get("fraction");
    if !(frac > 0.0 && frac < 1.0) {
        return Err(Error::InvalidParameter(format!("fraction must lie in (0, 1), got {frac}")));
    }
    let (hx, hy) = g.half_widths();
    let (hx, hy) = (frac * hx, frac * hy);
    Ok(BuiltSurface { patch: Box::new(GraphSurface::new(g)), sampling: Rect::new((-hx, hx), (-hy, hy)) })
}

fn paraboloid(p: &Params) -> Result<BuiltSurface> {
    Ok(BuiltSurface {
        patch: Box::new(GraphSurface::new(Paraboloid { a: p.get("a") })),
        sampling: Rect::new((-1.0, 1.0), (-1.0, 1.0)),
    })
}

/// `branch > 0` selects the `alpha = (1 + sqrt 3)/2` branch, otherwise `(1 - sqrt 3)/2`.
pub fn branch_from_sign(v: f64) -> AxisBranch {
    if v > 0.0 {
        AxisBranch::Plus
    } else {
        AxisBranch::Minus
    }
}

fn axis_orthogonal(p: &Params) -> Result<BuiltSurface> {
    let prof = axis_orthogonal_profile(branch_from_sign(p.get("branch")), positive(p, "x_max")?)?;
    let len = prof.arc_length();
    Ok(rotational(prof, (0.0, len)))
}

pub static REGISTRY: &[SurfaceEntry] = &[
    SurfaceEntry {
        name: "plane",
        description: "horizontal plane z = height",
        params: &[("height", 0.0)],
        build: plane,
    },
    SurfaceEntry {
        name: "sphere",
        description: "round sphere about the origin, s from the south pole",
        params: &[("radius", 1.0)],
        build: sphere,
    },
    SurfaceEntry {
        name: "cylinder",
        description: "circular cylinder about the z-axis (rulings along z)",
        params: &[("radius", 1.0)],
        build: cylinder,
    },
    SurfaceEntry {
        name: "catenoid",
        description: "catenoid with neck radius a",
        params: &[("a", 1.0)],
        build: catenoid,
    },
    SurfaceEntry {
        name: "cone",
        description: "rotational surface of the line (c1, c2) + s (cos theta, sin theta)",
        params: &[("theta", std::f64::consts::FRAC_PI_4), ("c1", 2.0), ("c2", 0.0), ("half_length", 0.5)],
        build: cone,
    },
    SurfaceEntry {
        name: "torus",
        description: "torus of revolution, tube radius r about the circle x = c1",
        params: &[("r", 0.5), ("c1", 2.0)],
        build: torus,
    },
    SurfaceEntry {
        name: "grim_reaper",
        description: "cylinder over the grim reaper, rulings along y",
        params: &[("half_width", 2.0)],
        build: grim_reaper,
    },
    SurfaceEntry {
        name: "constant_k_cylinder",
        description: "cylinder over the constant-K generating curve, rulings along y",
        params: &[("K", 1.0)],
        build: generating_cylinder,
    },
    SurfaceEntry {
        name: "graph",
        description: "separable graph solution with parameter c, sampled on a fraction of its domain",
        params: &[("c", 1.0), ("fraction", 0.9)],
        build: separable_graph,
    },
    SurfaceEntry {
        name: "paraboloid",
        description: "graph z = a (x^2 + y^2)",
        params: &[("a", 1.0)],
        build: paraboloid,
    },
    SurfaceEntry {
        name: "axis_orthogonal",
        description: "K = 1/2 rotational surface meeting the axis orthogonally (branch = +1 or -1)",
        params: &[("branch", -1.0), ("x_max", 1.5)],
        build: axis_orthogonal,
    },
];

pub fn lookup(name: &str) -> Result<&'static SurfaceEntry> {
    REGISTRY.iter().find(|e| e.name == name).ok_or_else(|| {
        let names: Vec<&str> = REGISTRY.iter().map(|e| e.name).collect();
        Error::InvalidParameter(format!("unknown surface {name:?} (known: {})", names.join(", ")))
    })
}

pub fn build(spec: &SurfaceSpec) -> Result<BuiltSurface> {
    lookup(&spec.name)?.build(&spec.params)
}
