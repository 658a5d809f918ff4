//! Cylindrical surfaces `psi(s, t) = gamma(s) + t w` and their generating
//! curves of constant sectional curvature.
//!
//! The generating curve lives in the plane through the origin orthogonal to
//! `w`, written in an in-plane frame `(e_a, e_b)` with `e_b = e_a x w`. With
//! that choice the curve normal `n = -z' e_a + x' e_b` satisfies
//! `det(gamma', w, n) = 1` and coincides with the surface normal
//! `psi_s x psi_t`.

use crate::error::{Error, Result};
use crate::geom::{Patch, Rect, SurfaceJet2};
use crate::profile::{CurveDomain, ProfileCurve, ProfilePoint};
use crate::quadrature::{gauss_kronrod15, integrate};
use crate::snm::CanonicalConnection;
use crate::vec3::{det, Vec3};

/// Absolute tolerance of the adaptive quadrature for `x(s)`.
pub const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct CylinderSpec<C> {
    ruling: Vec3,
    axis_a: Vec3,
    axis_b: Vec3,
    profile: C,
}

impl<C: ProfileCurve> CylinderSpec<C> {
    /// `ruling` is normalized; `in_plane_axis` is projected onto the plane
    /// orthogonal to it and normalized.
    pub fn new(ruling: Vec3, in_plane_axis: Vec3, profile: C) -> Result<Self> {
        let w = ruling.normalized().ok_or(Error::InvalidRuling)?;
        let a = (in_plane_axis - w * in_plane_axis.dot(w)).normalized().ok_or(Error::InvalidRuling)?;
        Ok(Self { ruling: w, axis_a: a, axis_b: a.cross(w), profile })
    }

    /// Rulings along `y`, curve in the `xz`-plane.
    pub fn standard(profile: C) -> Self {
        Self { ruling: Vec3::Y, axis_a: Vec3::X, axis_b: Vec3::Z, profile }
    }

    pub fn ruling(&self) -> Vec3 {
        self.ruling
    }

    pub fn profile(&self) -> &C {
        &self.profile
    }

    pub fn curve_point(&self, p: &ProfilePoint) -> Vec3 {
        self.axis_a * p.x + self.axis_b * p.z
    }

    pub fn tangent(&self, p: &ProfilePoint) -> Vec3 {
        self.axis_a * p.dx + self.axis_b * p.dz
    }

    pub fn curve_normal(&self, p: &ProfilePoint) -> Vec3 {
        self.axis_a * (-p.dz) + self.axis_b * p.dx
    }

    /// `det(gamma', w, n)`; equals one for unit-speed curves.
    pub fn orientation(&self, s: f64) -> Result<f64> {
        let p = self.profile.eval(s)?;
        Ok(det(self.tangent(&p), self.ruling, self.curve_normal(&p)))
    }
}

impl<C: ProfileCurve> Patch for CylinderSpec<C> {
    fn point(&self, s: f64, t: f64) -> Vec3 {
        match self.profile.eval(s) {
            Ok(p) => self.curve_point(&p) + self.ruling * t,
            Err(_) => Vec3::new(f64::NAN, f64::NAN, f64::NAN),
        }
    }

    fn domain(&self) -> Rect {
        let d = self.profile.domain();
        Rect::new((d.lo, d.hi), (f64::NEG_INFINITY, f64::INFINITY))
    }

    fn analytic_jet(&self, s: f64, t: f64) -> Option<SurfaceJet2> {
        let p = self.profile.eval(s).ok()?;
        Some(SurfaceJet2 {
            p: self.curve_point(&p) + self.ruling * t,
            ds: self.tangent(&p),
            dt: self.ruling,
            dss: self.axis_a * p.ddx + self.axis_b * p.ddz,
            dst: Vec3::ZERO,
            dtt: Vec3::ZERO,
        })
    }
}

/// Closed-form sectional curvature of the cylinder at curve parameter `s`:
/// `K = (<w, C>^2 + <gamma', C>^2 - kappa <n, C>) / 2`. Independent of `t`.
pub fn cylinder_k<C: ProfileCurve>(spec: &CylinderSpec<C>, conn: &CanonicalConnection, s: f64) -> Result<f64> {
    let p = spec.profile.eval(s)?;
    let c = conn.field();
    let wc = spec.ruling.dot(c);
    let tc = spec.tangent(&p).dot(c);
    let nc = spec.curve_normal(&p).dot(c);
    Ok(0.5 * (wc * wc + tc * tc - p.curvature() * nc))
}

/// Width of the cached quadrature panels.
const PANEL: f64 = 1.0 / 16.0;
/// Half-width of the cached window around the anchor on unbounded domains.
const WINDOW: f64 = 40.0;

/// Generating curve of a cylinder with rulings orthogonal to `C = d/dz` and
/// constant sectional curvature `K`.
///
/// `z` comes from the closed-form solution of `z'' = z'^2 - 2K`;
/// `x(s) = int sqrt(1 - z'^2)` is computed by adaptive quadrature from the
/// anchor (`s = 0`, or `s = 1` when `K = 0`), where `x = 0`.
#[derive(Debug, Clone)]
pub struct GeneratingCurve {
    k: f64,
    rate: f64,
    domain: CurveDomain,
    anchor: f64,
    nodes: Vec<f64>,
    x_nodes: Vec<f64>,
}

impl GeneratingCurve {
    pub fn curvature_target(&self) -> f64 {
        self.k
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn z(&self, s: f64) -> f64 {
        let m = self.rate;
        if self.k > 0.0 {
            -(m * s).cosh().ln()
        } else if self.k == 0.0 {
            -s.ln()
        } else {
            -(m * s).cos().ln()
        }
    }

    pub fn dz(&self, s: f64) -> f64 {
        let m = self.rate;
        if self.k > 0.0 {
            -m * (m * s).tanh()
        } else if self.k == 0.0 {
            -1.0 / s
        } else {
            m * (m * s).tan()
        }
    }

    pub fn ddz(&self, s: f64) -> f64 {
        let m = self.rate;
        if self.k > 0.0 {
            -m * m / (m * s).cosh().powi(2)
        } else if self.k == 0.0 {
            1.0 / (s * s)
        } else {
            m * m / (m * s).cos().powi(2)
        }
    }

    pub fn dx(&self, s: f64) -> f64 {
        (1.0 - self.dz(s).powi(2)).max(0.0).sqrt()
    }

    /// `x(s)` relative to the anchor.
    pub fn x(&self, s: f64) -> Result<f64> {
        self.domain.check(s)?;
        let f = |u: f64| self.dx(u);
        let near_edge = |a: f64, b: f64| {
            let (lo, hi) = (a.min(b), a.max(b));
            lo - self.domain.lo < PANEL || self.domain.hi - hi < PANEL
        };
        let i = self.nearest_node(s);
        let (s0, x0) = (self.nodes[i], self.x_nodes[i]);
        if s == s0 {
            return Ok(x0);
        }
        if (s - s0).abs() <= PANEL && !near_edge(s0, s) {
            return Ok(x0 + gauss_kronrod15(&f, s0, s).0);
        }
        Ok(x0 + integrate(f, s0, s, 1e-12)?)
    }

    fn nearest_node(&self, s: f64) -> usize {
        let idx = self.nodes.partition_point(|&n| n < s);
        if idx == 0 {
            0
        } else if idx == self.nodes.len() {
            idx - 1
        } else if (self.nodes[idx] - s).abs() < (s - self.nodes[idx - 1]).abs() {
            idx
        } else {
            idx - 1
        }
    }
}

impl ProfileCurve for GeneratingCurve {
    fn eval(&self, s: f64) -> Result<ProfilePoint> {
        let x = self.x(s)?;
        let dz = self.dz(s);
        let ddz = self.ddz(s);
        let dx = self.dx(s);
        Ok(ProfilePoint { x, z: self.z(s), dx, dz, ddx: -dz * ddz / dx, ddz })
    }

    fn domain(&self) -> CurveDomain {
        self.domain
    }
}

/// Maximal parameter interval on which `1 - z'^2 >= 0` for the given `K`.
pub fn generating_curve_domain(k: f64) -> CurveDomain {
    if k > 0.0 {
        let m = (2.0 * k).sqrt();
        if m <= 1.0 {
            CurveDomain::all()
        } else {
            let half = (1.0 / m).atanh() / m;
            CurveDomain::new(-half, half)
        }
    } else if k == 0.0 {
        CurveDomain::new(1.0, f64::INFINITY)
    } else {
        let m = (-2.0 * k).sqrt();
        let half = (1.0 / m).atan() / m;
        CurveDomain::new(-half, half)
    }
}

/// Generating curve with constant sectional curvature `k` (rulings orthogonal to `C`).
pub fn solve_generating_curve(k: f64) -> Result<GeneratingCurve> {
    if !k.is_finite() {
        return Err(Error::InvalidParameter(format!("K must be finite, got {k}")));
    }
    let domain = generating_curve_domain(k);
    let anchor = if k == 0.0 { 1.0 } else { 0.0 };
    if !domain.contains(anchor) {
        return Err(Error::EmptyDomain(format!("K = {k}")));
    }
    let mut curve = GeneratingCurve {
        k,
        rate: (2.0 * k.abs()).sqrt(),
        domain,
        anchor,
        nodes: Vec::new(),
        x_nodes: Vec::new(),
    };

    let lo = domain.lo.max(anchor - WINDOW);
    let hi = domain.hi.min(anchor + WINDOW);
    let mut nodes = vec![anchor];
    let mut s = anchor;
    while s - PANEL > lo {
        s -= PANEL;
        nodes.push(s);
    }
    if lo < anchor && nodes.last() != Some(&lo) {
        nodes.push(lo);
    }
    nodes.reverse();
    let mut s = anchor;
    while s + PANEL < hi {
        s += PANEL;
        nodes.push(s);
    }
    if hi > anchor && nodes.last() != Some(&hi) {
        nodes.push(hi);
    }

    let anchor_idx = nodes.iter().position(|&n| n == anchor).expect("anchor is a node");
    let mut x_nodes = vec![0.0; nodes.len()];
    let f = |u: f64| curve.dx(u);
    for i in anchor_idx + 1..nodes.len() {
        x_nodes[i] = x_nodes[i - 1] + integrate(f, nodes[i - 1], nodes[i], QUADRATURE_TOL / 64.0)?;
    }
    for i in (0..anchor_idx).rev() {
        x_nodes[i] = x_nodes[i + 1] - integrate(f, nodes[i], nodes[i + 1], QUADRATURE_TOL / 64.0)?;
    }
    curve.nodes = nodes;
    curve.x_nodes = x_nodes;
    Ok(curve)
}

/// Grim reaper `(atan(sinh s), -log cosh s)`, the `K = 1/2` generating curve.
pub fn closed_form_curve_k_half(s: f64) -> Result<(f64, f64)> {
    if !s.is_finite() {
        return Err(Error::OutOfCurveDomain { value: s, lo: f64::NEG_INFINITY, hi: f64::INFINITY });
    }
    Ok((s.sinh().atan(), -s.cosh().ln()))
}

/// Closed-form `K = -1/2` generating curve on `|tan s| <= 1`:
/// `x = sqrt 2 asin(sqrt 2 sin s) - acot(sqrt(cot^2 s - 1))`, `z = -log cos s`.
///
/// The printed antiderivative holds for `s >= 0`; negative parameters use the
/// odd extension `x(-s) = -x(s)` (the integrand `sqrt(1 - tan^2 s)` is even).
pub fn closed_form_curve_k_minus_half(s: f64) -> Result<(f64, f64)> {
    let limit = std::f64::consts::FRAC_PI_4;
    if !(s.abs() <= limit) {
        return Err(Error::OutOfCurveDomain { value: s, lo: -limit, hi: limit });
    }
    let z = -s.cos().ln();
    let a = s.abs();
    if a == 0.0 {
        return Ok((0.0, z));
    }
    // same expression with both arcsines rewritten through sqrt(cos 2s), which
    // stays accurate up to the endpoint
    let root2 = std::f64::consts::SQRT_2;
    let r = (2.0 * a).cos().max(0.0).sqrt();
    let sin = a.sin();
    let x = (root2 - 1.0) * std::f64::consts::FRAC_PI_2 - root2 * (r / (root2 * sin)).atan() + (r / sin).atan();
    Ok((x.copysign(s), z))
}
