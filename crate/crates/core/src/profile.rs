//! Planar arc-length curves `s -> (x(s), z(s))` shared by the cylindrical and
//! rotational constructions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position and derivatives up to order two of a planar curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub x: f64,
    pub z: f64,
    pub dx: f64,
    pub dz: f64,
    pub ddx: f64,
    pub ddz: f64,
}

impl ProfilePoint {
    /// Signed Frenet curvature `x' z'' - z' x''`.
    pub fn curvature(&self) -> f64 {
        self.dx * self.ddz - self.dz * self.ddx
    }

    /// `x'^2 + z'^2 - 1`; zero for an arc-length parametrization.
    pub fn speed_defect(&self) -> f64 {
        self.dx * self.dx + self.dz * self.dz - 1.0
    }
}

/// Parameter interval of a curve. Bounds may be infinite; evaluation is
/// allowed on the closure, sampling uses the open interior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveDomain {
    pub lo: f64,
    pub hi: f64,
}

impl CurveDomain {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn all() -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.lo && s <= self.hi
    }

    pub fn contains_open(&self, s: f64) -> bool {
        s > self.lo && s < self.hi
    }

    pub fn check(&self, s: f64) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::OutOfCurveDomain { value: s, lo: self.lo, hi: self.hi })
        }
    }

    /// Finite sub-interval `[lo + margin, hi - margin]` clipped to `[-limit, limit]`.
    pub fn sampling_range(&self, margin: f64, limit: f64) -> (f64, f64) {
        ((self.lo + margin).max(-limit), (self.hi - margin).min(limit))
    }
}

pub trait ProfileCurve: Send + Sync {
    fn eval(&self, s: f64) -> Result<ProfilePoint>;
    fn domain(&self) -> CurveDomain;
}

impl<C: ProfileCurve + ?Sized> ProfileCurve for &C {
    fn eval(&self, s: f64) -> Result<ProfilePoint> {
        (**self).eval(s)
    }
    fn domain(&self) -> CurveDomain {
        (**self).domain()
    }
}

impl<C: ProfileCurve + ?Sized> ProfileCurve for Box<C> {
    fn eval(&self, s: f64) -> Result<ProfilePoint> {
        (**self).eval(s)
    }
    fn domain(&self) -> CurveDomain {
        (**self).domain()
    }
}

impl<C: ProfileCurve + ?Sized> ProfileCurve for std::sync::Arc<C> {
    fn eval(&self, s: f64) -> Result<ProfilePoint> {
        (**self).eval(s)
    }
    fn domain(&self) -> CurveDomain {
        (**self).domain()
    }
}

/// Arc-length curves with closed-form derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticProfile {
    /// `(c1, c2) + s (cos theta, sin theta)`.
    Line { c1: f64, c2: f64, theta: f64 },
    /// `(c1, c2) + r (cos(s/r + phase), sin(s/r + phase))`.
    Circle { c1: f64, c2: f64, r: f64, phase: f64 },
    /// Catenoid profile `(sqrt(a^2 + s^2), z0 + a asinh(s/a))`.
    Catenary { a: f64, z0: f64 },
    /// Grim reaper `(offset + atan(sinh s), -log cosh s)`.
    GrimReaper { offset: f64 },
}

impl AnalyticProfile {
    /// Meridian of the sphere of radius `r` about the origin, starting at the south pole.
    pub fn sphere(r: f64) -> Self {
        AnalyticProfile::Circle { c1: 0.0, c2: 0.0, r, phase: -std::f64::consts::FRAC_PI_2 }
    }

    /// Vertical line `x = r`: the circular cylinder.
    pub fn vertical_line(r: f64) -> Self {
        AnalyticProfile::Line { c1: r, c2: 0.0, theta: std::f64::consts::FRAC_PI_2 }
    }

    /// Horizontal line at height `z`: the horizontal plane.
    pub fn horizontal_line(z: f64) -> Self {
        AnalyticProfile::Line { c1: 0.0, c2: z, theta: 0.0 }
    }

    pub fn point(&self, s: f64) -> ProfilePoint {
        match *self {
            AnalyticProfile::Line { c1, c2, theta } => {
                let (st, ct) = theta.sin_cos();
                ProfilePoint { x: c1 + s * ct, z: c2 + s * st, dx: ct, dz: st, ddx: 0.0, ddz: 0.0 }
            }
            AnalyticProfile::Circle { c1, c2, r, phase } => {
                let (sa, ca) = (s / r + phase).sin_cos();
                ProfilePoint {
                    x: c1 + r * ca,
                    z: c2 + r * sa,
                    dx: -sa,
                    dz: ca,
                    ddx: -ca / r,
                    ddz: -sa / r,
                }
            }
            AnalyticProfile::Catenary { a, z0 } => {
                let q = (a * a + s * s).sqrt();
                let q3 = q * q * q;
                ProfilePoint {
                    x: q,
                    z: z0 + a * (s / a).asinh(),
                    dx: s / q,
                    dz: a / q,
                    ddx: a * a / q3,
                    ddz: -a * s / q3,
                }
            }
            AnalyticProfile::GrimReaper { offset } => {
                let sech = 1.0 / s.cosh();
                let tanh = s.tanh();
                ProfilePoint {
                    x: offset + s.sinh().atan(),
                    z: -s.cosh().ln(),
                    dx: sech,
                    dz: -tanh,
                    ddx: -sech * tanh,
                    ddz: -sech * sech,
                }
            }
        }
    }
}

impl ProfileCurve for AnalyticProfile {
    fn eval(&self, s: f64) -> Result<ProfilePoint> {
        if !s.is_finite() {
            return Err(Error::OutOfCurveDomain { value: s, lo: f64::NEG_INFINITY, hi: f64::INFINITY });
        }
        Ok(self.point(s))
    }

    fn domain(&self) -> CurveDomain {
        CurveDomain::all()
    }
}

/// Curve defined by a closure returning the full point.
pub struct FnProfile<F> {
    f: F,
    domain: CurveDomain,
}

impl<F> FnProfile<F>
where
    F: Fn(f64) -> ProfilePoint + Send + Sync,
{
    pub fn new(f: F, domain: CurveDomain) -> Self {
        Self { f, domain }
    }
}

impl<F> ProfileCurve for FnProfile<F>
where
    F: Fn(f64) -> ProfilePoint + Send + Sync,
{
    fn eval(&self, s: f64) -> Result<ProfilePoint> {
        self.domain.check(s)?;
        Ok((self.f)(s))
    }
    fn domain(&self) -> CurveDomain {
        self.domain
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples() -> Vec<AnalyticProfile> {
        vec![
            AnalyticProfile::Line { c1: 1.0, c2: -2.0, theta: 0.7 },
            AnalyticProfile::Circle { c1: 3.0, c2: 1.0, r: 0.8, phase: 0.3 },
            AnalyticProfile::Catenary { a: 1.3, z0: 0.2 },
            AnalyticProfile::GrimReaper { offset: 2.0 },
            AnalyticProfile::sphere(2.0),
        ]
    }

    #[test]
    fn analytic_profiles_are_unit_speed_with_consistent_derivatives() {
        let h = 1e-5;
        for p in samples() {
            for i in -10..=10 {
                let s = 0.17 * i as f64;
                let pt = p.point(s);
                assert!(pt.speed_defect().abs() < 1e-14, "{p:?}");
                let (a, b) = (p.point(s + h), p.point(s - h));
                assert!(((a.x - b.x) / (2.0 * h) - pt.dx).abs() < 1e-8);
                assert!(((a.z - b.z) / (2.0 * h) - pt.dz).abs() < 1e-8);
                assert!(((a.dx - b.dx) / (2.0 * h) - pt.ddx).abs() < 1e-8);
                assert!(((a.dz - b.dz) / (2.0 * h) - pt.ddz).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn circle_curvature_is_inverse_radius() {
        let p = AnalyticProfile::Circle { c1: 3.0, c2: 1.0, r: 0.8, phase: 0.3 };
        assert!((p.point(0.4).curvature() - 1.25).abs() < 1e-14);
        let sphere = AnalyticProfile::sphere(1.0).point(std::f64::consts::FRAC_PI_2);
        assert!((sphere.x - 1.0).abs() < 1e-15 && sphere.z.abs() < 1e-15);
    }

    #[test]
    fn domain_checks() {
        let d = CurveDomain::new(1.0, 2.0);
        assert!(d.check(1.0).is_ok());
        assert!(!d.contains_open(1.0));
        assert!(matches!(d.check(2.5), Err(Error::OutOfCurveDomain { .. })));
        assert_eq!(CurveDomain::all().sampling_range(0.0, 5.0), (-5.0, 5.0));
    }
}
