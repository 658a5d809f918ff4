//! Rotational surfaces about the z-axis,
//! `psi(s, t) = (x(s) cos t, x(s) sin t, z(s))`, with an arc-length profile.
//!
//! With `N = psi_s x psi_t / |psi_s x psi_t| = (-z' cos t, -z' sin t, x')`:
//! `G = z' kappa / x`, `H = (z' + x kappa) / (2x)` and
//! `<C, N> = -a z' cos t - b z' sin t + c x'` for `C = (a, b, c)`.

mod axis;
mod classify;
mod shoot;

pub use axis::{
    axis_orthogonal_profile, first_integral, first_integral_branch, first_integral_slope_derivative,
    graph_limit, graph_slope_derivative, integrate_first_integral_flow, quadratic_zprime, AxisBranch,
    AxisOrthogonalProfile, FirstIntegralBranch, GraphPoint, ADMISSION_TOL, FLOW_START, MAX_SLOPE,
    SERIES_START,
};
pub use classify::{
    circle_residual, conical_scan, CircleResidual, ConicalClassification, ConicalScan,
    ConicalScanOptions,
};
pub use shoot::{profile_ode_shoot, OdeProfile, ShootStop, SINGULAR_TOL};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{fit_periodic, TrigFit, DEFAULT_SAMPLES};
use crate::geom::{Patch, Rect, SurfaceJet2};
use crate::profile::{ProfileCurve, ProfilePoint};
use crate::snm::CanonicalConnection;
use crate::vec3::Vec3;

/// Closed forms with a `1/x` factor are not evaluated closer than this to the axis.
pub const AXIS_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct RotationalSurface<C> {
    profile: C,
}

impl<C: ProfileCurve> RotationalSurface<C> {
    pub fn new(profile: C) -> Self {
        Self { profile }
    }

    pub fn profile(&self) -> &C {
        &self.profile
    }

    fn off_axis(&self, s: f64) -> Result<ProfilePoint> {
        let p = self.profile.eval(s)?;
        if !(p.x >= AXIS_TOL) {
            return Err(Error::AxisPoint(p.x));
        }
        Ok(p)
    }
}

impl<C: ProfileCurve> Patch for RotationalSurface<C> {
    fn point(&self, s: f64, t: f64) -> Vec3 {
        match self.profile.eval(s) {
            Ok(p) => Vec3::new(p.x * t.cos(), p.x * t.sin(), p.z),
            Err(_) => Vec3::new(f64::NAN, f64::NAN, f64::NAN),
        }
    }

    fn domain(&self) -> Rect {
        let d = self.profile.domain();
        Rect::new((d.lo, d.hi), (f64::NEG_INFINITY, f64::INFINITY))
    }

    fn analytic_jet(&self, s: f64, t: f64) -> Option<SurfaceJet2> {
        let p = self.profile.eval(s).ok()?;
        let (st, ct) = t.sin_cos();
        Some(SurfaceJet2 {
            p: Vec3::new(p.x * ct, p.x * st, p.z),
            ds: Vec3::new(p.dx * ct, p.dx * st, p.dz),
            dt: Vec3::new(-p.x * st, p.x * ct, 0.0),
            dss: Vec3::new(p.ddx * ct, p.ddx * st, p.ddz),
            dst: Vec3::new(-p.dx * st, p.dx * ct, 0.0),
            dtt: Vec3::new(-p.x * ct, -p.x * st, 0.0),
        })
    }
}

/// Gaussian and mean curvature of the rotational surface at a profile point.
pub fn gauss_and_mean(p: &ProfilePoint) -> (f64, f64) {
    let kappa = p.curvature();
    (p.dz * kappa / p.x, (p.dz + p.x * kappa) / (2.0 * p.x))
}

/// Sectional curvature at `(s, t)` for an arbitrary unit field `C = (a, b, c)`:
///
/// `K = ((b cos t - a sin t)^2 + (x'(a cos t + b sin t) + c z')^2) / 2 + G - <C, N> H`.
pub fn rotational_k_general<C: ProfileCurve>(
    surface: &RotationalSurface<C>,
    conn: &CanonicalConnection,
    s: f64,
    t: f64,
) -> Result<f64> {
    let p = surface.off_axis(s)?;
    Ok(k_general_at(&p, conn.field(), t))
}

fn k_general_at(p: &ProfilePoint, c: Vec3, t: f64) -> f64 {
    let (g, h) = gauss_and_mean(p);
    let (st, ct) = t.sin_cos();
    let radial = c.x * ct + c.y * st;
    let angular = c.y * ct - c.x * st;
    let along = p.dx * radial + c.z * p.dz;
    let c_dot_n = -p.dz * radial + c.z * p.dx;
    0.5 * (angular * angular + along * along) + g - c_dot_n * h
}

/// Closed form for `C = d/dz`:
/// `K = ((2z' - x x') kappa + z'(x z' - x')) / (2x)`.
pub fn rotational_k_axis_aligned<C: ProfileCurve>(surface: &RotationalSurface<C>, s: f64) -> Result<f64> {
    let p = surface.off_axis(s)?;
    Ok(axis_aligned_k(&p))
}

/// Axis-aligned closed form at a single profile point (requires `x > 0`).
pub fn axis_aligned_k(p: &ProfilePoint) -> f64 {
    ((2.0 * p.dz - p.x * p.dx) * p.curvature() + p.dz * (p.x * p.dz - p.dx)) / (2.0 * p.x)
}

/// `t`-independent curvature for `C = (0, 0, +-1)`; errors for any other field.
///
/// For `C = -d/dz` the sign of the `x' H` term flips:
/// `K = z'^2 / 2 + G + x' H`.
pub fn rotational_k_axis_aligned_checked<C: ProfileCurve>(
    surface: &RotationalSurface<C>,
    conn: &CanonicalConnection,
    s: f64,
) -> Result<f64> {
    let c = conn.field();
    if c.x != 0.0 || c.y != 0.0 {
        return Err(Error::NotAxisAligned(c.x, c.y, c.z));
    }
    let p = surface.off_axis(s)?;
    if c.z > 0.0 {
        Ok(axis_aligned_k(&p))
    } else {
        let (g, h) = gauss_and_mean(&p);
        Ok(0.5 * p.dz * p.dz + g + p.dx * h)
    }
}

/// Coefficients of `K(s, .)` as a trigonometric polynomial in `t`.
///
/// `a0` is the `t`-average of `K`; the residual of the equation `K = const`
/// has constant term `a0 - const`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct FourierCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub a3: f64,
    pub b3: f64,
}

impl FourierCoefficients {
    pub fn from_fit(fit: &TrigFit) -> Self {
        let get = |v: &Vec<f64>, n: usize| v.get(n).copied().unwrap_or(0.0);
        Self {
            a0: get(&fit.cos, 0),
            a1: get(&fit.cos, 1),
            b1: get(&fit.sin, 1),
            a2: get(&fit.cos, 2),
            b2: get(&fit.sin, 2),
            a3: get(&fit.cos, 3),
            b3: get(&fit.sin, 3),
        }
    }

    pub fn as_array(&self) -> [f64; 7] {
        [self.a0, self.a1, self.b1, self.a2, self.b2, self.a3, self.b3]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest non-constant coefficient in absolute value.
    pub fn max_oscillating(&self) -> f64 {
        self.as_array()[1..].iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// Closed-form coefficients of `t -> K(s, t)` at a profile point:
///
/// `A2 = (b^2 - a^2) z'^2 / 4`, `B2 = -a b z'^2 / 2`, `A1 = a z'(H + c x')`,
/// `B1 = b z'(H + c x')`, mean `(a^2 + b^2 + 2c^2) z'^2 / 4 + (a^2 + b^2) x'^2 / 2 - c H x' + G`.
pub fn analytic_fourier_coefficients(p: &ProfilePoint, c: Vec3) -> FourierCoefficients {
    let (g, h) = gauss_and_mean(p);
    let (a, b, c) = (c.x, c.y, c.z);
    let zp2 = p.dz * p.dz;
    FourierCoefficients {
        a0: 0.25 * (a * a + b * b + 2.0 * c * c) * zp2 + 0.5 * (a * a + b * b) * p.dx * p.dx - c * h * p.dx + g,
        a1: a * p.dz * (h + c * p.dx),
        b1: b * p.dz * (h + c * p.dx),
        a2: 0.25 * (b * b - a * a) * zp2,
        b2: -0.5 * a * b * zp2,
        a3: 0.0,
        b3: 0.0,
    }
}

/// Closed-form coefficients alongside a least-squares fit of sampled `K(s, .)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierComparison {
    pub analytic: FourierCoefficients,
    pub fitted: FourierCoefficients,
    pub fit_residual: f64,
}

impl FourierComparison {
    pub fn max_deviation(&self) -> f64 {
        self.analytic.max_abs_diff(&self.fitted)
    }
}

pub fn fourier_coefficients<C: ProfileCurve>(
    surface: &RotationalSurface<C>,
    conn: &CanonicalConnection,
    s: f64,
) -> Result<FourierComparison> {
    let p = surface.off_axis(s)?;
    let c = conn.field();
    let fit = fit_periodic(|t| k_general_at(&p, c, t), DEFAULT_SAMPLES, 3);
    Ok(FourierComparison {
        analytic: analytic_fourier_coefficients(&p, c),
        fitted: FourierCoefficients::from_fit(&fit),
        fit_residual: fit.max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Differentiation;
    use crate::profile::AnalyticProfile;
    use crate::snm::curvature_at;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    #[test]
    fn first_fundamental_form_of_the_rotational_patch() {
        let surf = RotationalSurface::new(AnalyticProfile::Catenary { a: 0.8, z0: 0.0 });
        let jet = crate::geom::jet2(&surf, 0.4, 1.3, 1e-4).unwrap();
        let forms = crate::geom::fundamental_forms(&jet).unwrap();
        let x = surf.profile().point(0.4).x;
        assert!((forms.g11 - 1.0).abs() < 1e-14);
        assert!(forms.g12.abs() < 1e-14);
        assert!((forms.g22 - x * x).abs() < 1e-14);
        let p = surf.profile().point(0.4);
        let n = Vec3::new(-p.dz * 1.3f64.cos(), -p.dz * 1.3f64.sin(), p.dx);
        assert!((forms.normal - n).max_abs() < 1e-14);
    }

    #[test]
    fn sphere_closed_form() {
        let surf = RotationalSurface::new(AnalyticProfile::sphere(1.0));
        let k = rotational_k_axis_aligned(&surf, FRAC_PI_2).unwrap();
        assert!((k - 1.5).abs() < 1e-14);
        for i in 1..10 {
            let s = 0.3 * i as f64;
            let expected = 0.5 * (2.0 - 2.0 * s.cos() + s.sin().powi(2));
            assert!((rotational_k_axis_aligned(&surf, s).unwrap() - expected).abs() < 1e-13);
            let general = rotational_k_general(&surf, &CanonicalConnection::vertical(), s, 0.77).unwrap();
            assert!((general - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn cylinder_and_horizontal_plane() {
        for r in [0.3, 1.0, 4.0] {
            let cyl = RotationalSurface::new(AnalyticProfile::vertical_line(r));
            assert!((rotational_k_axis_aligned(&cyl, 0.2).unwrap() - 0.5).abs() < 1e-15);
        }
        let plane = RotationalSurface::new(AnalyticProfile::Line { c1: 0.0, c2: 2.0, theta: 0.0 });
        assert_eq!(rotational_k_axis_aligned(&plane, 1.5).unwrap(), 0.0);
        // any unit C = (a, b, 0): K = (a^2 + b^2) / 2
        let conn = CanonicalConnection::new(Vec3::new(0.6, 0.8, 0.0)).unwrap();
        for i in 0..8 {
            let k = rotational_k_general(&plane, &conn, 0.5 + 0.3 * i as f64, 0.4 * i as f64).unwrap();
            assert!((k - 0.5).abs() < 1e-15);
        }
        assert!(matches!(rotational_k_axis_aligned(&plane, 0.0), Err(Error::AxisPoint(_))));
        assert!(matches!(
            rotational_k_axis_aligned_checked(&plane, &conn, 1.0),
            Err(Error::NotAxisAligned(..))
        ));
        let down = CanonicalConnection::new(-Vec3::Z).unwrap();
        let sphere = RotationalSurface::new(AnalyticProfile::sphere(1.0));
        for s in [0.4, 1.0, 2.2] {
            let closed = rotational_k_axis_aligned_checked(&sphere, &down, s).unwrap();
            let general = rotational_k_general(&sphere, &down, s, 0.3).unwrap();
            assert!((closed - general).abs() < 1e-14);
        }
    }

    #[test]
    fn general_formula_matches_pipeline() {
        let profiles = [
            AnalyticProfile::Circle { c1: 3.0, c2: 0.0, r: 1.0, phase: 0.4 },
            AnalyticProfile::Catenary { a: 1.1, z0: 0.5 },
            AnalyticProfile::GrimReaper { offset: 2.0 },
            AnalyticProfile::Line { c1: 2.0, c2: 0.0, theta: 0.9 },
        ];
        let conn = CanonicalConnection::new(Vec3::new(0.3, -0.5, 0.7)).unwrap();
        for profile in profiles {
            let surf = RotationalSurface::new(profile);
            for i in 0..10 {
                let (s, t) = (0.15 * i as f64 - 0.6, 0.63 * i as f64);
                let closed = rotational_k_general(&surf, &conn, s, t).unwrap();
                let pipeline = curvature_at(&surf, s, t, &conn, Differentiation::Auto).unwrap().k;
                assert!((closed - pipeline).abs() < 1e-12, "{profile:?}");
            }
        }
    }

    #[test]
    fn fourier_examples() {
        let surf = RotationalSurface::new(AnalyticProfile::vertical_line(1.5)); // z' = 1
        let cmp = fourier_coefficients(&surf, &CanonicalConnection::new(Vec3::X).unwrap(), 0.0).unwrap();
        assert!((cmp.analytic.a2 + 0.25).abs() < 1e-15);
        assert_eq!(cmp.analytic.b2, 0.0);
        assert!(cmp.max_deviation() < 1e-8);

        let diag = CanonicalConnection::new(Vec3::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0)).unwrap();
        let cmp = fourier_coefficients(&surf, &diag, 0.0).unwrap();
        assert!(cmp.analytic.a2.abs() < 1e-15);
        assert!((cmp.analytic.b2 + 0.25).abs() < 1e-15);
        assert!(cmp.max_deviation() < 1e-8);

        let catenoid = RotationalSurface::new(AnalyticProfile::Catenary { a: 1.0, z0: 0.0 });
        let cmp = fourier_coefficients(&catenoid, &CanonicalConnection::vertical(), 0.3).unwrap();
        assert_eq!(cmp.analytic.max_oscillating(), 0.0);
        assert!(cmp.fitted.max_oscillating() < 1e-12);
    }
}
