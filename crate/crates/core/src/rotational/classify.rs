//! Straight-line and circular profiles under `C = d/dz`.

use serde::Serialize;

use super::{axis_aligned_k, FourierCoefficients, AXIS_TOL};
use crate::error::{Error, Result};
use crate::fourier::{fit_periodic, DEFAULT_SAMPLES};
use crate::profile::AnalyticProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicalScanOptions {
    pub s_range: (f64, f64),
    pub samples: usize,
    /// Largest spread of sampled `K` still classified as constant.
    pub constant_tol: f64,
}

impl Default for ConicalScanOptions {
    fn default() -> Self {
        Self { s_range: (-0.5, 0.5), samples: 101, constant_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConicalClassification {
    Constant { k: f64 },
    NonConstant { variation: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConicalScan {
    pub classification: ConicalClassification,
    /// `(s, K(s))` along the line.
    pub samples: Vec<(f64, f64)>,
}

impl ConicalScan {
    pub fn variation(&self) -> f64 {
        let (lo, hi) = self
            .samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, k)| (lo.min(k), hi.max(k)));
        hi - lo
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.classification, ConicalClassification::Constant { .. })
    }
}

/// Samples `K` along the profile line `(c1, c2) + s (cos theta, sin theta)` and
/// reports whether it is constant.
pub fn conical_scan(theta: f64, c1: f64, c2: f64, opts: &ConicalScanOptions) -> Result<ConicalScan> {
    let line = AnalyticProfile::Line { c1, c2, theta };
    let (lo, hi) = opts.s_range;
    let n = opts.samples.max(2);
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let s = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let p = line.point(s);
        if !(p.x >= AXIS_TOL) {
            return Err(Error::LineCrossesAxis(s));
        }
        samples.push((s, axis_aligned_k(&p)));
    }
    let mut scan = ConicalScan { classification: ConicalClassification::NonConstant { variation: 0.0 }, samples };
    let variation = scan.variation();
    scan.classification = if variation <= opts.constant_tol {
        let mean = scan.samples.iter().map(|s| s.1).sum::<f64>() / n as f64;
        ConicalClassification::Constant { k: mean }
    } else {
        ConicalClassification::NonConstant { variation }
    };
    Ok(scan)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleResidual {
    pub r: f64,
    pub c1: f64,
    pub k: f64,
    /// Coefficients in the angle `u = s / r`.
    pub coefficients: FourierCoefficients,
    pub fit_residual: f64,
}

/// Fits `2 K x - ((2z' - x x') kappa + z'(x z' - x'))` along the circle
/// `(c1, 0) + r (cos u, sin u)` through order three in `u`. The equation
/// `K = const` holds only if every coefficient vanishes.
pub fn circle_residual(r: f64, c1: f64, k: f64) -> Result<CircleResidual> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("circle radius must be positive, got {r}")));
    }
    if !(c1 - r >= AXIS_TOL) {
        return Err(Error::CircleTouchesAxis { r, c1 });
    }
    let circle = AnalyticProfile::Circle { c1, c2: 0.0, r, phase: 0.0 };
    let fit = fit_periodic(
        |u| {
            let p = circle.point(r * u);
            2.0 * k * p.x - 2.0 * p.x * axis_aligned_k(&p)
        },
        DEFAULT_SAMPLES,
        3,
    );
    Ok(CircleResidual {
        r,
        c1,
        k,
        coefficients: FourierCoefficients::from_fit(&fit),
        fit_residual: fit.max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn vertical_and_horizontal_lines_are_constant() {
        let opts = ConicalScanOptions::default();
        let vertical = conical_scan(FRAC_PI_2, 2.0, 0.0, &opts).unwrap();
        match vertical.classification {
            ConicalClassification::Constant { k } => assert!((k - 0.5).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let horizontal = conical_scan(0.0, 1.0, 5.0, &opts).unwrap();
        assert_eq!(horizontal.classification, ConicalClassification::Constant { k: 0.0 });
    }

    #[test]
    fn oblique_line_varies() {
        let scan = conical_scan(FRAC_PI_4, 3.0, 0.0, &ConicalScanOptions::default()).unwrap();
        // K = sin^2/2 - sin cos / (2x) = 1/4 - 1/(4x) on x in [3 - 0.354, 3 + 0.354]
        let expected = 0.25 / (3.0 - 0.5 * FRAC_PI_4.cos()) - 0.25 / (3.0 + 0.5 * FRAC_PI_4.cos());
        assert!(!scan.is_constant());
        assert!((scan.variation() - expected).abs() < 1e-12);
    }

    #[test]
    fn crossing_lines_are_rejected() {
        assert!(matches!(
            conical_scan(0.0, 0.0, 5.0, &ConicalScanOptions::default()),
            Err(Error::LineCrossesAxis(_))
        ));
    }

    #[test]
    fn circle_coefficients_match_expansion() {
        // expansion of 2K(c1 + r cos u) - (2 cos u + x sin u)/r - cos u (x cos u + sin u)
        for (r, c1, k) in [(1.0, 2.0, 0.3), (0.5, 4.0, -1.0), (2.0, 2.5, 0.5)] {
            let res = circle_residual(r, c1, k).unwrap();
            let expected = FourierCoefficients {
                a0: 2.0 * k * c1 - c1 / 2.0,
                a1: 2.0 * k * r - 2.0 / r - 0.75 * r,
                b1: -c1 / r,
                a2: -c1 / 2.0,
                b2: -1.0,
                a3: -r / 4.0,
                b3: 0.0,
            };
            assert!(res.coefficients.max_abs_diff(&expected) < 1e-12, "{res:?}");
            assert!(res.fit_residual < 1e-12);
        }
    }

    #[test]
    fn circle_touching_the_axis() {
        assert!(matches!(circle_residual(1.0, 1.0, 0.5), Err(Error::CircleTouchesAxis { .. })));
        assert!(circle_residual(-1.0, 3.0, 0.5).is_err());
    }
}
