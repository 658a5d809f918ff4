//! Parametric patches, second-order jets, fundamental forms and the classical
//! curvatures G (Gaussian) and H (mean).
//!
//! The unit normal is always `N = (psi_s x psi_t) / |psi_s x psi_t|`; every
//! signed quantity downstream (H, <C, N>) inherits that orientation.

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Below this value of `g11 g22 - g12^2` (equivalently `|psi_s x psi_t|^2`)
/// a point is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Default central-difference step at `(s, t)`.
pub fn default_step(s: f64, t: f64) -> f64 {
    1e-4 * 1f64.max(s.abs()).max(t.abs())
}

/// Closed rectangle of parameters. Bounds may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub s: (f64, f64),
    pub t: (f64, f64),
}

impl Rect {
    pub const fn new(s: (f64, f64), t: (f64, f64)) -> Self {
        Self { s, t }
    }

    pub fn unbounded() -> Self {
        Self::new((f64::NEG_INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::INFINITY))
    }

    /// True when `(s, t)` is inside the rectangle shrunk by `margin` on every side.
    pub fn contains_with_margin(&self, s: f64, t: f64, margin: f64) -> bool {
        s.is_finite()
            && t.is_finite()
            && s - margin >= self.s.0
            && s + margin <= self.s.1
            && t - margin >= self.t.0
            && t + margin <= self.t.1
    }

    pub fn contains(&self, s: f64, t: f64) -> bool {
        self.contains_with_margin(s, t, 0.0)
    }
}

/// Value and partial derivatives up to order two of a parametrization at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet2 {
    pub p: Vec3,
    pub ds: Vec3,
    pub dt: Vec3,
    pub dss: Vec3,
    pub dst: Vec3,
    pub dtt: Vec3,
}

impl SurfaceJet2 {
    /// Jet of the reparametrization `(s, t) -> psi(t, s)`.
    pub fn swapped(self) -> Self {
        Self {
            p: self.p,
            ds: self.dt,
            dt: self.ds,
            dss: self.dtt,
            dst: self.dst,
            dtt: self.dss,
        }
    }

    /// Jet of the translated surface `psi + offset`.
    pub fn translated(self, offset: Vec3) -> Self {
        Self { p: self.p + offset, ..self }
    }

    /// Largest componentwise difference between the derivative fields of two jets.
    pub fn max_derivative_diff(&self, other: &SurfaceJet2) -> f64 {
        [
            self.ds - other.ds,
            self.dt - other.dt,
            self.dss - other.dss,
            self.dst - other.dst,
            self.dtt - other.dtt,
        ]
        .iter()
        .map(|v| v.max_abs())
        .fold(0.0, f64::max)
    }
}

/// A parametrized surface `psi(s, t)` over a rectangular domain.
///
/// Implementors with closed-form derivatives override [`Patch::analytic_jet`];
/// everything else is differentiated by central differences.
pub trait Patch: Send + Sync {
    fn point(&self, s: f64, t: f64) -> Vec3;

    fn domain(&self) -> Rect {
        Rect::unbounded()
    }

    fn analytic_jet(&self, _s: f64, _t: f64) -> Option<SurfaceJet2> {
        None
    }
}

impl<P: Patch + ?Sized> Patch for &P {
    fn point(&self, s: f64, t: f64) -> Vec3 {
        (**self).point(s, t)
    }
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn analytic_jet(&self, s: f64, t: f64) -> Option<SurfaceJet2> {
        (**self).analytic_jet(s, t)
    }
}

impl<P: Patch + ?Sized> Patch for Box<P> {
    fn point(&self, s: f64, t: f64) -> Vec3 {
        (**self).point(s, t)
    }
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn analytic_jet(&self, s: f64, t: f64) -> Option<SurfaceJet2> {
        (**self).analytic_jet(s, t)
    }
}

/// How derivatives are obtained when building a jet.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Differentiation {
    /// Closed-form derivatives when the patch provides them, central differences otherwise.
    #[default]
    Auto,
    /// Always central differences; `None` selects [`default_step`].
    FiniteDifference(Option<f64>),
}

fn check_immersion(jet: &SurfaceJet2) -> Result<()> {
    let area2 = jet.ds.cross(jet.dt).norm_squared();
    if !(area2 >= DEGENERACY_TOL) {
        return Err(Error::DegeneratePatch(area2.sqrt()));
    }
    Ok(())
}

/// Second-order jet of `patch` at `(s, t)`.
///
/// Returns the analytic jet when the patch has one; otherwise central
/// differences with the given `step`.
pub fn jet2<P: Patch + ?Sized>(patch: &P, s: f64, t: f64, step: f64) -> Result<SurfaceJet2> {
    if !patch.domain().contains(s, t) {
        return Err(Error::OutOfDomain { s, t });
    }
    match patch.analytic_jet(s, t) {
        Some(jet) => {
            check_immersion(&jet)?;
            Ok(jet)
        }
        None => finite_difference_jet2(patch, s, t, step),
    }
}

/// Central-difference jet with truncation error O(step^2). Requires a margin of
/// `2 * step` to the domain boundary.
pub fn finite_difference_jet2<P: Patch + ?Sized>(
    patch: &P,
    s: f64,
    t: f64,
    step: f64,
) -> Result<SurfaceJet2> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidStep(step));
    }
    if !patch.domain().contains_with_margin(s, t, 2.0 * step) {
        return Err(Error::OutOfDomain { s, t });
    }
    let h = step;
    let f = |ds: f64, dt: f64| patch.point(s + ds, t + dt);
    let c = f(0.0, 0.0);
    let sp = f(h, 0.0);
    let sm = f(-h, 0.0);
    let tp = f(0.0, h);
    let tm = f(0.0, -h);
    let pp = f(h, h);
    let pm = f(h, -h);
    let mp = f(-h, h);
    let mm = f(-h, -h);
    let jet = SurfaceJet2 {
        p: c,
        ds: (sp - sm) / (2.0 * h),
        dt: (tp - tm) / (2.0 * h),
        dss: (sp - 2.0 * c + sm) / (h * h),
        dst: (pp - pm - mp + mm) / (4.0 * h * h),
        dtt: (tp - 2.0 * c + tm) / (h * h),
    };
    check_immersion(&jet)?;
    Ok(jet)
}

/// Jet according to the requested differentiation mode.
pub fn jet_with<P: Patch + ?Sized>(
    patch: &P,
    s: f64,
    t: f64,
    mode: Differentiation,
) -> Result<SurfaceJet2> {
    match mode {
        Differentiation::Auto => jet2(patch, s, t, default_step(s, t)),
        Differentiation::FiniteDifference(step) => {
            finite_difference_jet2(patch, s, t, step.unwrap_or_else(|| default_step(s, t)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
    pub normal: Vec3,
}

impl FundamentalForms {
    pub fn metric_det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }
}

pub fn fundamental_forms(jet: &SurfaceJet2) -> Result<FundamentalForms> {
    let g11 = jet.ds.dot(jet.ds);
    let g12 = jet.ds.dot(jet.dt);
    let g22 = jet.dt.dot(jet.dt);
    let det = g11 * g22 - g12 * g12;
    if !(det >= DEGENERACY_TOL) {
        return Err(Error::DegenerateMetric(det));
    }
    let normal = jet
        .ds
        .cross(jet.dt)
        .normalized()
        .ok_or(Error::DegenerateMetric(det))?;
    Ok(FundamentalForms {
        g11,
        g12,
        g22,
        h11: jet.dss.dot(normal),
        h12: jet.dst.dot(normal),
        h22: jet.dtt.dot(normal),
        normal,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalCurvatures {
    pub gaussian: f64,
    pub mean: f64,
    pub normal: Vec3,
}

pub fn classical_curvatures(forms: &FundamentalForms) -> Result<ClassicalCurvatures> {
    let det = forms.metric_det();
    if !(det >= DEGENERACY_TOL) {
        return Err(Error::DegenerateMetric(det));
    }
    let FundamentalForms { g11, g12, g22, h11, h12, h22, normal } = *forms;
    Ok(ClassicalCurvatures {
        gaussian: (h11 * h22 - h12 * h12) / det,
        mean: (g22 * h11 - 2.0 * g12 * h12 + g11 * h22) / (2.0 * det),
        normal,
    })
}

/// Patch defined by a closure, with optional closed-form jet.
pub struct FnPatch<F, J = fn(f64, f64) -> SurfaceJet2> {
    point: F,
    jet: Option<J>,
    domain: Rect,
}

impl<F> FnPatch<F>
where
    F: Fn(f64, f64) -> Vec3 + Send + Sync,
{
    pub fn new(point: F, domain: Rect) -> Self {
        Self { point, jet: None, domain }
    }
}

impl<F, J> FnPatch<F, J>
where
    F: Fn(f64, f64) -> Vec3 + Send + Sync,
    J: Fn(f64, f64) -> SurfaceJet2 + Send + Sync,
{
    pub fn with_jet(point: F, jet: J, domain: Rect) -> Self {
        Self { point, jet: Some(jet), domain }
    }
}

impl<F, J> Patch for FnPatch<F, J>
where
    F: Fn(f64, f64) -> Vec3 + Send + Sync,
    J: Fn(f64, f64) -> SurfaceJet2 + Send + Sync,
{
    fn point(&self, s: f64, t: f64) -> Vec3 {
        (self.point)(s, t)
    }
    fn domain(&self) -> Rect {
        self.domain
    }
    fn analytic_jet(&self, s: f64, t: f64) -> Option<SurfaceJet2> {
        self.jet.as_ref().map(|j| j(s, t))
    }
}

/// Patch with the parameters exchanged, `(s, t) -> psi(t, s)`.
pub struct Swapped<P>(pub P);

impl<P: Patch> Patch for Swapped<P> {
    fn point(&self, s: f64, t: f64) -> Vec3 {
        self.0.point(t, s)
    }
    fn domain(&self) -> Rect {
        let d = self.0.domain();
        Rect::new(d.t, d.s)
    }
    fn analytic_jet(&self, s: f64, t: f64) -> Option<SurfaceJet2> {
        self.0.analytic_jet(t, s).map(SurfaceJet2::swapped)
    }
}

/// Patch rigidly translated by a fixed offset.
pub struct Translated<P> {
    pub inner: P,
    pub offset: Vec3,
}

impl<P: Patch> Patch for Translated<P> {
    fn point(&self, s: f64, t: f64) -> Vec3 {
        self.inner.point(s, t) + self.offset
    }
    fn domain(&self) -> Rect {
        self.inner.domain()
    }
    fn analytic_jet(&self, s: f64, t: f64) -> Option<SurfaceJet2> {
        self.inner.analytic_jet(s, t).map(|j| j.translated(self.offset))
    }
}

/// Affine plane `origin + s u + t v`.
#[derive(Debug, Clone, Copy)]
pub struct PlanePatch {
    pub origin: Vec3,
    pub u: Vec3,
    pub v: Vec3,
}

impl PlanePatch {
    pub fn horizontal(height: f64) -> Self {
        Self { origin: Vec3::new(0.0, 0.0, height), u: Vec3::X, v: Vec3::Y }
    }
}

impl Patch for PlanePatch {
    fn point(&self, s: f64, t: f64) -> Vec3 {
        self.origin + self.u * s + self.v * t
    }
    fn analytic_jet(&self, s: f64, t: f64) -> Option<SurfaceJet2> {
        Some(SurfaceJet2 {
            p: self.point(s, t),
            ds: self.u,
            dt: self.v,
            dss: Vec3::ZERO,
            dst: Vec3::ZERO,
            dtt: Vec3::ZERO,
        })
    }
}

/// Sphere of radius `r` centred at the origin,
/// `r (sin s cos t, sin s sin t, -cos s)` for `s` in `[0, pi]`.
#[derive(Debug, Clone, Copy)]
pub struct SpherePatch {
    pub radius: f64,
}

impl Patch for SpherePatch {
    fn point(&self, s: f64, t: f64) -> Vec3 {
        Vec3::new(s.sin() * t.cos(), s.sin() * t.sin(), -s.cos()) * self.radius
    }
    fn domain(&self) -> Rect {
        Rect::new((0.0, std::f64::consts::PI), (f64::NEG_INFINITY, f64::INFINITY))
    }
    fn analytic_jet(&self, s: f64, t: f64) -> Option<SurfaceJet2> {
        let r = self.radius;
        let (ss, cs) = s.sin_cos();
        let (st, ct) = t.sin_cos();
        Some(SurfaceJet2 {
            p: Vec3::new(ss * ct, ss * st, -cs) * r,
            ds: Vec3::new(cs * ct, cs * st, ss) * r,
            dt: Vec3::new(-ss * st, ss * ct, 0.0) * r,
            dss: Vec3::new(-ss * ct, -ss * st, cs) * r,
            dst: Vec3::new(-cs * st, cs * ct, 0.0) * r,
            dtt: Vec3::new(-ss * ct, -ss * st, 0.0) * r,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cylinder() -> impl Patch {
        FnPatch::with_jet(
            |s: f64, t: f64| Vec3::new(s.cos(), s.sin(), t),
            |s: f64, t: f64| SurfaceJet2 {
                p: Vec3::new(s.cos(), s.sin(), t),
                ds: Vec3::new(-s.sin(), s.cos(), 0.0),
                dt: Vec3::Z,
                dss: Vec3::new(-s.cos(), -s.sin(), 0.0),
                dst: Vec3::ZERO,
                dtt: Vec3::ZERO,
            },
            Rect::unbounded(),
        )
    }

    #[test]
    fn plane_jet_has_no_second_derivatives() {
        let plane = FnPatch::new(|s, t| Vec3::new(s, t, 0.0), Rect::unbounded());
        let jet = jet2(&plane, 0.3, -1.2, 1e-3).unwrap();
        assert!(jet.dss.max_abs() < 1e-9);
        assert!(jet.dst.max_abs() < 1e-9);
        assert!(jet.dtt.max_abs() < 1e-9);
        let forms = fundamental_forms(&jet).unwrap();
        assert!(forms.h11.abs() < 1e-9 && forms.h12.abs() < 1e-9 && forms.h22.abs() < 1e-9);
        let k = classical_curvatures(&forms).unwrap();
        assert!(k.gaussian.abs() < 1e-9 && k.mean.abs() < 1e-9);
    }

    #[test]
    fn cylinder_jet_and_forms() {
        let cyl = cylinder();
        let jet = jet2(&cyl, 0.0, 0.0, 1e-4).unwrap();
        assert_eq!(jet.dss, Vec3::new(-1.0, 0.0, 0.0));
        assert_eq!(jet.dst, Vec3::ZERO);
        let fd = finite_difference_jet2(&cyl, 0.0, 0.0, 1e-4).unwrap();
        assert!(fd.max_derivative_diff(&jet) < 1e-7);

        let forms = fundamental_forms(&jet).unwrap();
        assert!((forms.g11 - 1.0).abs() < 1e-15 && (forms.g22 - 1.0).abs() < 1e-15);
        assert_eq!(forms.g12, 0.0);
        // outward normal (cos s, sin s, 0) -> h11 = <(-1,0,0), (1,0,0)> = -1
        assert_eq!(forms.normal, Vec3::X);
        assert_eq!(forms.h11, -1.0);
        assert_eq!(forms.h12, 0.0);
        assert_eq!(forms.h22, 0.0);
    }

    #[test]
    fn graph_of_c1_family_member_at_origin() {
        // psi = (x, y, -log(cos x cos y)); hand differentiation gives u_xx = u_yy = 1, u_xy = 0 at 0
        let graph = FnPatch::new(
            |x: f64, y: f64| Vec3::new(x, y, -(x.cos() * y.cos()).ln()),
            Rect::new((-1.5, 1.5), (-1.5, 1.5)),
        );
        let jet = jet2(&graph, 0.0, 0.0, 1e-4).unwrap();
        assert!((jet.dss - Vec3::Z).max_abs() < 1e-7);
        assert!((jet.dtt - Vec3::Z).max_abs() < 1e-7);
        assert!(jet.dst.max_abs() < 1e-7);
    }

    #[test]
    fn sphere_gauss_curvature_is_one_on_a_grid() {
        let sphere = SpherePatch { radius: 1.0 };
        for i in 1..20 {
            for j in 0..20 {
                let s = std::f64::consts::PI * i as f64 / 20.0;
                let t = std::f64::consts::TAU * j as f64 / 20.0;
                let jet = jet2(&sphere, s, t, 1e-4).unwrap();
                let k = classical_curvatures(&fundamental_forms(&jet).unwrap()).unwrap();
                assert!((k.gaussian - 1.0).abs() < 1e-12);
                assert!(k.mean * k.mean >= k.gaussian - 1e-12);
            }
        }
    }

    #[test]
    fn out_of_domain_and_degenerate_points_are_errors() {
        let sphere = SpherePatch { radius: 1.0 };
        assert!(matches!(jet2(&sphere, -0.5, 0.0, 1e-4), Err(Error::OutOfDomain { .. })));
        // within the finite-difference margin of the boundary
        assert!(matches!(
            finite_difference_jet2(&sphere, 1e-4, 0.0, 1e-4),
            Err(Error::OutOfDomain { .. })
        ));
        // the pole is a degenerate point of the parametrization
        assert!(matches!(jet2(&sphere, 0.0, 0.3, 1e-4), Err(Error::DegeneratePatch(_))));
        let cyl = cylinder();
        assert!(matches!(finite_difference_jet2(&cyl, 0.0, 0.0, 0.0), Err(Error::InvalidStep(_))));
    }

    #[test]
    fn degenerate_metric_is_rejected() {
        let jet = SurfaceJet2 {
            p: Vec3::ZERO,
            ds: Vec3::X,
            dt: Vec3::X * 2.0,
            dss: Vec3::ZERO,
            dst: Vec3::ZERO,
            dtt: Vec3::ZERO,
        };
        assert!(matches!(fundamental_forms(&jet), Err(Error::DegenerateMetric(_))));
    }

    #[test]
    fn finite_differences_converge_at_second_order() {
        let sphere = SpherePatch { radius: 1.3 };
        let (s, t) = (0.9, 0.4);
        let exact = sphere.analytic_jet(s, t).unwrap();
        let h = 1e-2;
        let e1 = finite_difference_jet2(&sphere, s, t, h).unwrap().max_derivative_diff(&exact);
        let e2 = finite_difference_jet2(&sphere, s, t, h / 2.0).unwrap().max_derivative_diff(&exact);
        let ratio = e1 / e2;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn swapping_parameters_keeps_g_and_flips_h() {
        let sphere = SpherePatch { radius: 2.0 };
        let swapped = Swapped(sphere);
        let a = classical_curvatures(&fundamental_forms(&jet2(&sphere, 1.1, 0.2, 1e-4).unwrap()).unwrap()).unwrap();
        let b = classical_curvatures(&fundamental_forms(&jet2(&swapped, 0.2, 1.1, 1e-4).unwrap()).unwrap()).unwrap();
        assert!((a.gaussian - b.gaussian).abs() < 1e-12);
        assert!((a.mean + b.mean).abs() < 1e-12);
        assert!((a.normal + b.normal).max_abs() < 1e-12);
    }
}
