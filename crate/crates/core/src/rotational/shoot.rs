//! Constant-`K` profiles under `C = d/dz` by direct integration of the
//! axis-aligned closed form solved for the curvature.

use serde::Serialize;

use super::AXIS_TOL;
use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions, Termination, Trajectory};
use crate::profile::{CurveDomain, ProfileCurve, ProfilePoint};

/// Integration stops once `|2z' - x x'|` falls below this.
pub const SINGULAR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShootStop {
    Completed,
    AxisReached,
    /// The curvature denominator `2z' - x x'` reached the tolerance or changed sign.
    SingularSet,
    StepUnderflow,
}

/// `2 sin(phi) - x cos(phi)`.
fn denominator(x: f64, phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    2.0 * s - x * c
}

fn curvature(k: f64, x: f64, phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    (2.0 * k * x - s * (x * s - c)) / (2.0 * s - x * c)
}

/// Arc-length profile with state `(x, z, phi)`, `x' = cos phi`, `z' = sin phi`.
#[derive(Debug, Clone)]
pub struct OdeProfile {
    k: f64,
    trajectory: Trajectory<3, ShootStop>,
    stop: ShootStop,
}

impl OdeProfile {
    pub fn curvature_target(&self) -> f64 {
        self.k
    }

    pub fn stop(&self) -> ShootStop {
        self.stop
    }

    pub fn s_end(&self) -> f64 {
        self.trajectory.end()
    }

    /// Accepted integrator nodes `(s, [x, z, phi])`.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, [f64; 3])> + '_ {
        self.trajectory.times.iter().copied().zip(self.trajectory.states.iter().copied())
    }
}

impl ProfileCurve for OdeProfile {
    fn eval(&self, s: f64) -> Result<ProfilePoint> {
        self.domain().check(s)?;
        let [x, z, phi] = self.trajectory.eval(s);
        let (sp, cp) = phi.sin_cos();
        let kappa = curvature(self.k, x, phi);
        Ok(ProfilePoint { x, z, dx: cp, dz: sp, ddx: -sp * kappa, ddz: cp * kappa })
    }

    fn domain(&self) -> CurveDomain {
        let (a, b) = (self.trajectory.start(), self.trajectory.end());
        CurveDomain::new(a.min(b), a.max(b))
    }
}

/// Shoots the constant-`K` profile from `(x0, z0)` with tangent angle `phi0`
/// over `s in [0, s_max]` (or `[s_max, 0]`).
pub fn profile_ode_shoot(k: f64, x0: f64, z0: f64, phi0: f64, s_max: f64) -> Result<OdeProfile> {
    for (name, v) in [("K", k), ("x0", x0), ("z0", z0), ("phi0", phi0), ("s_max", s_max)] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} must be finite")));
        }
    }
    if !(x0 >= AXIS_TOL) {
        return Err(Error::AxisPoint(x0));
    }
    let d0 = denominator(x0, phi0);
    if d0.abs() < SINGULAR_TOL {
        return Err(Error::SingularStart(d0.abs()));
    }
    let rhs = move |_s: f64, y: &[f64; 3]| {
        let (sp, cp) = y[2].sin_cos();
        [cp, sp, curvature(k, y[0], y[2])]
    };
    let stop = move |_s: f64, y: &[f64; 3]| {
        if y[0] < AXIS_TOL {
            return Some(ShootStop::AxisReached);
        }
        let d = denominator(y[0], y[2]);
        if d.abs() < SINGULAR_TOL || d.signum() != d0.signum() {
            return Some(ShootStop::SingularSet);
        }
        None
    };
    let opts = OdeOptions::default();
    let trajectory = integrate(rhs, 0.0, [x0, z0, phi0], s_max, &opts, stop);
    let stop = match &trajectory.termination {
        Termination::Completed => ShootStop::Completed,
        Termination::Stopped(s) => *s,
        Termination::StepUnderflow | Termination::MaxSteps => ShootStop::StepUnderflow,
    };
    Ok(OdeProfile { k, trajectory, stop })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotational::axis_aligned_k;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn cylinder_start_stays_vertical() {
        let prof = profile_ode_shoot(0.5, 1.3, 0.0, FRAC_PI_2, 10.0).unwrap();
        assert_eq!(prof.stop(), ShootStop::Completed);
        for i in 0..=100 {
            let p = prof.eval(0.1 * i as f64).unwrap();
            assert!((p.x - 1.3).abs() < 1e-8);
            assert!((p.z - 0.1 * i as f64).abs() < 1e-8);
        }
    }

    #[test]
    fn horizontal_start_stays_flat() {
        let prof = profile_ode_shoot(0.0, 0.5, 2.5, 0.0, 3.0).unwrap();
        for i in 0..=30 {
            let p = prof.eval(0.1 * i as f64).unwrap();
            assert!((p.z - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn generic_start_keeps_k_half() {
        let prof = profile_ode_shoot(0.5, 1.0, 0.0, FRAC_PI_4, 5.0).unwrap();
        let end = prof.s_end();
        assert!(end > 0.1);
        let mut max_dev: f64 = 0.0;
        let mut max_phi_change: f64 = 0.0;
        for i in 0..=200 {
            let p = prof.eval(end * i as f64 / 200.0).unwrap();
            if p.x > 1e-3 && (2.0 * p.dz - p.x * p.dx).abs() > 1e-3 {
                max_dev = max_dev.max((axis_aligned_k(&p) - 0.5).abs());
            }
            max_phi_change = max_phi_change.max((p.dz - FRAC_PI_4.sin()).abs());
        }
        assert!(max_dev < 1e-6, "{max_dev}");
        assert!(max_phi_change > 1e-3, "profile should bend");
    }

    #[test]
    fn rejects_singular_start() {
        // 2 sin(phi) = x cos(phi) at x = 2, phi = pi/4
        assert!(matches!(profile_ode_shoot(0.5, 2.0, 0.0, FRAC_PI_4, 1.0), Err(Error::SingularStart(_))));
        assert!(matches!(profile_ode_shoot(0.5, 0.0, 0.0, 1.0, 1.0), Err(Error::AxisPoint(_))));
    }
}
