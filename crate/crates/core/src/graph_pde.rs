//! Graphs `z = u(x, y)` with `K = K~` under `C = d/dz`, which is the PDE
//!
//! `2(u_xx u_yy - u_xy^2) = (1 + u_y^2) u_xx - 2 u_x u_y u_xy + (1 + u_x^2) u_yy`,
//!
//! and its separable solutions `u = f(x) + g(y)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Patch, Rect, SurfaceJet2};
use crate::vec3::Vec3;

/// `u` and its partial derivatives through order two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphDerivatives {
    pub u: f64,
    pub ux: f64,
    pub uy: f64,
    pub uxx: f64,
    pub uxy: f64,
    pub uyy: f64,
}

pub trait GraphFunction: Send + Sync {
    fn derivatives(&self, x: f64, y: f64) -> Result<GraphDerivatives>;

    fn domain(&self) -> Rect {
        Rect::unbounded()
    }
}

impl<G: GraphFunction + ?Sized> GraphFunction for &G {
    fn derivatives(&self, x: f64, y: f64) -> Result<GraphDerivatives> {
        (**self).derivatives(x, y)
    }
    fn domain(&self) -> Rect {
        (**self).domain()
    }
}

impl<G: GraphFunction + ?Sized> GraphFunction for Box<G> {
    fn derivatives(&self, x: f64, y: f64) -> Result<GraphDerivatives> {
        (**self).derivatives(x, y)
    }
    fn domain(&self) -> Rect {
        (**self).domain()
    }
}

/// `u = a x + b y + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearGraph {
    pub a: f64,
    pub b: f64,
    pub c0: f64,
}

impl GraphFunction for LinearGraph {
    fn derivatives(&self, x: f64, y: f64) -> Result<GraphDerivatives> {
        Ok(GraphDerivatives { u: self.a * x + self.b * y + self.c0, ux: self.a, uy: self.b, uxx: 0.0, uxy: 0.0, uyy: 0.0 })
    }
}

/// `u = a (x^2 + y^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Paraboloid {
    pub a: f64,
}

impl GraphFunction for Paraboloid {
    fn derivatives(&self, x: f64, y: f64) -> Result<GraphDerivatives> {
        let a = self.a;
        Ok(GraphDerivatives {
            u: a * (x * x + y * y),
            ux: 2.0 * a * x,
            uy: 2.0 * a * y,
            uxx: 2.0 * a,
            uxy: 0.0,
            uyy: 2.0 * a,
        })
    }
}

/// `u = -(1/c) log cos(c x) - (1/k) log cos(k y)` with `k = c / (2c - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparableSolution {
    c: f64,
    k: f64,
}

impl SeparableSolution {
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!("c must be finite, got {c}")));
        }
        if c == 0.0 || c == 0.5 {
            return Err(Error::ExcludedParameter(c));
        }
        Ok(Self { c, k: c / (2.0 * c - 1.0) })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Separation constant of the `y` factor, `c / (2c - 1)`.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Half-widths `(pi / (2|c|), pi / (2|k|))` of the open rectangle where both cosines are positive.
    pub fn half_widths(&self) -> (f64, f64) {
        let q = std::f64::consts::FRAC_PI_2;
        (q / self.c.abs(), q / self.k.abs())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (hx, hy) = self.half_widths();
        x.abs() < hx && y.abs() < hy
    }
}

impl GraphFunction for SeparableSolution {
    fn derivatives(&self, x: f64, y: f64) -> Result<GraphDerivatives> {
        let (cx, ky) = ((self.c * x).cos(), (self.k * y).cos());
        if !(self.contains(x, y) && cx > 0.0 && ky > 0.0) {
            return Err(Error::OutOfDomain { s: x, t: y });
        }
        let (c, k) = (self.c, self.k);
        Ok(GraphDerivatives {
            u: -cx.ln() / c - ky.ln() / k,
            ux: (c * x).tan(),
            uy: (k * y).tan(),
            uxx: c / (cx * cx),
            uxy: 0.0,
            uyy: k / (ky * ky),
        })
    }

    fn domain(&self) -> Rect {
        let (hx, hy) = self.half_widths();
        Rect::new((-hx, hx), (-hy, hy))
    }
}

/// The patch `psi(x, y) = (x, y, u(x, y))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphSurface<G> {
    pub function: G,
}

impl<G: GraphFunction> GraphSurface<G> {
    pub fn new(function: G) -> Self {
        Self { function }
    }
}

impl<G: GraphFunction> Patch for GraphSurface<G> {
    fn point(&self, x: f64, y: f64) -> Vec3 {
        match self.function.derivatives(x, y) {
            Ok(d) => Vec3::new(x, y, d.u),
            Err(_) => Vec3::new(f64::NAN, f64::NAN, f64::NAN),
        }
    }

    fn domain(&self) -> Rect {
        self.function.domain()
    }

    fn analytic_jet(&self, x: f64, y: f64) -> Option<SurfaceJet2> {
        let d = self.function.derivatives(x, y).ok()?;
        Some(SurfaceJet2 {
            p: Vec3::new(x, y, d.u),
            ds: Vec3::new(1.0, 0.0, d.ux),
            dt: Vec3::new(0.0, 1.0, d.uy),
            dss: Vec3::new(0.0, 0.0, d.uxx),
            dst: Vec3::new(0.0, 0.0, d.uxy),
            dtt: Vec3::new(0.0, 0.0, d.uyy),
        })
    }
}

/// Left side minus right side of the graph PDE.
pub fn residual_from_derivatives(d: &GraphDerivatives) -> f64 {
    let lhs = 2.0 * (d.uxx * d.uyy - d.uxy * d.uxy);
    let rhs = (1.0 + d.uy * d.uy) * d.uxx - 2.0 * d.ux * d.uy * d.uxy + (1.0 + d.ux * d.ux) * d.uyy;
    lhs - rhs
}

pub fn pde_residual<G: GraphFunction + ?Sized>(g: &G, x: f64, y: f64) -> Result<f64> {
    Ok(residual_from_derivatives(&g.derivatives(x, y)?))
}

/// `2 f'' g'' - f'' (1 + g'^2) - g'' (1 + f'^2)`.
pub fn separable_residual(fpp: f64, one_plus_fp2: f64, gpp: f64, one_plus_gp2: f64) -> f64 {
    2.0 * fpp * gpp - fpp * one_plus_gp2 - gpp * one_plus_fp2
}

/// Value of the separable solution with parameter `c` at `(x, y)`.
pub fn solution_family(c: f64, x: f64, y: f64) -> Result<f64> {
    Ok(SeparableSolution::new(c)?.derivatives(x, y)?.u)
}
