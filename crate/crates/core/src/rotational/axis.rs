//! `K = 1/2` rotational profiles meeting the axis orthogonally, in graph form
//! `z = z(x)` with slope `p = z'(x)` and `W = sqrt(1 + p^2)`.
//!
//! Substituting the graph form into the axis-aligned closed form with `K = 1/2` gives
//!
//! `p' = W^2 (x + p) / (2p - x)`.
//!
//! The printed first integral
//!
//! `F(x, p) = (2p - x) p / W - 2(W - 1) - x^2 / 2`
//!
//! is instead conserved by `p' = W^2 (p + x W) / (2p - x)`. The two flows agree to
//! leading order at the axis (both leave it with `p ~ alpha x`,
//! `alpha^2 - alpha - 1/2 = 0`) and separate at `O(x^2)`. Both are provided:
//! [`axis_orthogonal_profile`] integrates the first equation and is the `K = 1/2`
//! surface; [`first_integral_branch`] tracks roots of the squared relation
//! `(4x^2 - (x^2 - 4)^2) p^2 + 16 x p + 16 - (x^2 - 4)^2 = 0` filtered by `F`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions, Termination, Trajectory};
use crate::profile::{CurveDomain, ProfileCurve, ProfilePoint};

/// Roots of the squared relation are kept when `|F| < ADMISSION_TOL`.
pub const ADMISSION_TOL: f64 = 1e-9;

/// Nominal root-tracking step in `x`.
const STEP: f64 = 1e-3;
const MIN_STEP: f64 = STEP / 1048576.0;
/// Graph form is abandoned once `|p|` exceeds this.
pub const MAX_SLOPE: f64 = 1e6;
/// Where the series start hands over to the integrator.
pub const SERIES_START: f64 = 1e-4;

pub fn first_integral(x: f64, p: f64) -> f64 {
    let w = (1.0 + p * p).sqrt();
    let w_minus_1 = p * p / (w + 1.0);
    (2.0 * p - x) * p / w - 2.0 * w_minus_1 - 0.5 * x * x
}

/// Real roots in `p` of the squared first integral that also satisfy `F = 0`,
/// sorted ascending. Empty when both roots are complex or spurious.
pub fn quadratic_zprime(x: f64) -> Result<Vec<f64>> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("x must be finite, got {x}")));
    }
    if x == 0.0 {
        return Ok(vec![0.0]);
    }
    let x2 = x * x;
    let d = (x2 - 4.0) * (x2 - 4.0);
    let a = 4.0 * x2 - d;
    let half_b = 8.0 * x;
    let c = x2 * (8.0 - x2);
    let mut roots = Vec::with_capacity(2);
    if a == 0.0 {
        if half_b == 0.0 {
            return Err(Error::NoRoot(x));
        }
        roots.push(-c / (2.0 * half_b));
    } else {
        // discriminant / 4 = (x^2 - 4)^2 x^2 (12 - x^2)
        let rest = 12.0 - x2;
        if rest < 0.0 {
            return Ok(Vec::new());
        }
        let sq = (x2 - 4.0).abs() * x.abs() * rest.sqrt();
        let q = -(half_b + half_b.signum() * sq);
        roots.push(q / a);
        if q != 0.0 {
            roots.push(c / q);
        }
    }
    roots.retain(|p| p.is_finite() && first_integral(x, *p).abs() < ADMISSION_TOL);
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + b.abs()));
    Ok(roots)
}

/// `dp/dx` of the `K = 1/2` equation in graph form. Singular at `2p = x`.
pub fn graph_slope_derivative(x: f64, p: f64) -> f64 {
    (1.0 + p * p) * (x + p) / (2.0 * p - x)
}

/// `dp/dx` of the flow that conserves [`first_integral`].
pub fn first_integral_slope_derivative(x: f64, p: f64) -> f64 {
    let w2 = 1.0 + p * p;
    w2 * (p + x * w2.sqrt()) / (2.0 * p - x)
}

/// The two branches leaving the axis, `p ~ alpha x` with `alpha^2 - alpha - 1/2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisBranch {
    /// `alpha = (1 + sqrt 3) / 2`.
    Plus,
    /// `alpha = (1 - sqrt 3) / 2`.
    Minus,
}

impl AxisBranch {
    pub const ALL: [AxisBranch; 2] = [AxisBranch::Plus, AxisBranch::Minus];

    pub fn alpha(self) -> f64 {
        match self {
            AxisBranch::Plus => 0.5 * (1.0 + 3f64.sqrt()),
            AxisBranch::Minus => 0.5 * (1.0 - 3f64.sqrt()),
        }
    }

    /// Cubic coefficient of the odd series `p = alpha x + beta x^3 + ...` of the `K = 1/2` equation.
    pub fn beta(self) -> f64 {
        let a = self.alpha();
        a * a * (1.0 + a) / (4.0 * (2.0 * a - 1.0))
    }

    /// Supremum of the `F = 0` branch: the leading coefficient `4x^2 - (x^2 - 4)^2`
    /// vanishes there and the slope diverges.
    pub fn first_integral_limit(self) -> f64 {
        match self {
            AxisBranch::Plus => 5f64.sqrt() - 1.0,
            AxisBranch::Minus => 5f64.sqrt() + 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AxisBranch::Plus => "plus",
            AxisBranch::Minus => "minus",
        }
    }
}

impl std::str::FromStr for AxisBranch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(AxisBranch::Plus),
            "minus" | "-" => Ok(AxisBranch::Minus),
            other => Err(Error::InvalidParameter(format!("unknown branch {other:?} (expected plus or minus)"))),
        }
    }
}

/// Point of the graph `z(x)` with slope and its derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphPoint {
    pub x: f64,
    pub z: f64,
    pub zp: f64,
    pub zpp: f64,
}

impl GraphPoint {
    /// Arc-length derivatives of the same point.
    pub fn to_profile_point(&self) -> ProfilePoint {
        let w2 = 1.0 + self.zp * self.zp;
        let w = w2.sqrt();
        let w4 = w2 * w2;
        ProfilePoint {
            x: self.x,
            z: self.z,
            dx: 1.0 / w,
            dz: self.zp / w,
            ddx: -self.zp * self.zpp / w4,
            ddz: self.zpp / w4,
        }
    }
}

fn graph_rhs(x: f64, y: &[f64; 3]) -> [f64; 3] {
    let p = y[1];
    [p, graph_slope_derivative(x, p), (1.0 + p * p).sqrt()]
}

fn slope_stop(x: f64, y: &[f64; 3]) -> Option<f64> {
    if y[1].abs() > MAX_SLOPE || !(2.0 * y[1] - x).is_normal() {
        Some(x)
    } else {
        None
    }
}

/// Axis-orthogonal `K = 1/2` profile: odd series on `[0, 1e-4]`, then
/// Dormand-Prince on `(z, p, s)` with `s` the arc length.
#[derive(Debug, Clone)]
pub struct AxisOrthogonalProfile {
    branch: AxisBranch,
    trajectory: Trajectory<3, f64>,
}

fn series(branch: AxisBranch, x: f64) -> [f64; 3] {
    let (a, b) = (branch.alpha(), branch.beta());
    let x2 = x * x;
    let p = x * (a + b * x2);
    let z = x2 * (0.5 * a + 0.25 * b * x2);
    // W = 1 + a^2 x^2 / 2 + O(x^4)
    let s = x * (1.0 + a * a * x2 / 6.0);
    [z, p, s]
}

/// Integrates the branch out to `x_max`; fails if the graph slope diverges first.
pub fn axis_orthogonal_profile(branch: AxisBranch, x_max: f64) -> Result<AxisOrthogonalProfile> {
    if !(x_max > SERIES_START) || !x_max.is_finite() {
        return Err(Error::InvalidParameter(format!("x_max must exceed {SERIES_START}, got {x_max}")));
    }
    let y0 = series(branch, SERIES_START);
    let trajectory = integrate(graph_rhs, SERIES_START, y0, x_max, &OdeOptions::default(), slope_stop);
    match trajectory.termination {
        Termination::Completed => Ok(AxisOrthogonalProfile { branch, trajectory }),
        _ => Err(Error::BranchLost(trajectory.end())),
    }
}

/// Abscissa where the branch's graph slope diverges (vertical tangent), if
/// that happens before `cap`.
pub fn graph_limit(branch: AxisBranch, cap: f64) -> Option<f64> {
    let y0 = series(branch, SERIES_START);
    let traj = integrate(graph_rhs, SERIES_START, y0, cap, &OdeOptions::default(), slope_stop);
    match traj.termination {
        Termination::Completed => None,
        _ => Some(traj.end()),
    }
}

impl AxisOrthogonalProfile {
    pub fn branch(&self) -> AxisBranch {
        self.branch
    }

    pub fn x_max(&self) -> f64 {
        self.trajectory.end()
    }

    pub fn arc_length(&self) -> f64 {
        self.trajectory.final_state()[2]
    }

    /// Integrator nodes `(x, [z, p, s])`.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, [f64; 3])> + '_ {
        self.trajectory.times.iter().copied().zip(self.trajectory.states.iter().copied())
    }

    fn state(&self, x: f64) -> Result<[f64; 3]> {
        if !(x >= 0.0 && x <= self.x_max()) {
            return Err(Error::OutOfCurveDomain { value: x, lo: 0.0, hi: self.x_max() });
        }
        if x < SERIES_START {
            Ok(series(self.branch, x))
        } else {
            Ok(self.trajectory.eval(x))
        }
    }

    pub fn slope(&self, x: f64) -> Result<f64> {
        Ok(self.state(x)?[1])
    }

    pub fn graph_point(&self, x: f64) -> Result<GraphPoint> {
        let [z, p, _] = self.state(x)?;
        let zpp = if x == 0.0 { self.branch.alpha() } else { graph_slope_derivative(x, p) };
        Ok(GraphPoint { x, z, zp: p, zpp })
    }

    /// Arc length from the axis to abscissa `x`.
    pub fn arc_length_at(&self, x: f64) -> Result<f64> {
        Ok(self.state(x)?[2])
    }

    /// Abscissa at arc length `s`, by safeguarded Newton iteration on the dense output.
    pub fn x_at_arc_length(&self, s: f64) -> Result<f64> {
        self.domain().check(s)?;
        let (mut lo, mut hi) = (0.0, self.x_max());
        let mut x = s.min(hi);
        for _ in 0..100 {
            let [_, p, sx] = self.state(x)?;
            let g = sx - s;
            if g == 0.0 {
                break;
            }
            if g > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let mut next = x - g / (1.0 + p * p).sqrt();
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 4.0 * f64::EPSILON * (1.0 + x) {
                x = next;
                break;
            }
            x = next;
        }
        Ok(x)
    }

    /// Arc-length point at abscissa `x`.
    pub fn arc_point(&self, x: f64) -> Result<ProfilePoint> {
        Ok(self.graph_point(x)?.to_profile_point())
    }
}

impl ProfileCurve for AxisOrthogonalProfile {
    fn eval(&self, s: f64) -> Result<ProfilePoint> {
        let x = self.x_at_arc_length(s)?;
        self.arc_point(x)
    }

    fn domain(&self) -> CurveDomain {
        CurveDomain::new(0.0, self.arc_length())
    }
}

/// Root branch of `F = 0` tracked from the axis.
#[derive(Debug, Clone)]
pub struct FirstIntegralBranch {
    branch: AxisBranch,
    xs: Vec<f64>,
    ps: Vec<f64>,
    dps: Vec<f64>,
}

fn tracked_derivative(branch: AxisBranch, x: f64, p: f64) -> f64 {
    if x == 0.0 {
        branch.alpha()
    } else {
        first_integral_slope_derivative(x, p)
    }
}

fn hermite_value(x0: f64, h: f64, f0: f64, f1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * f0 + (t3 - 2.0 * t2 + t) * h * d0 + (-2.0 * t3 + 3.0 * t2) * f1 + (t3 - t2) * h * d1
}

/// Marches the root branch from the axis to `x_max` with step `1e-3`, choosing
/// at each node the admitted root closest to the linear prediction and halving
/// the step where the two roots are hard to tell apart.
pub fn first_integral_branch(branch: AxisBranch, x_max: f64) -> Result<FirstIntegralBranch> {
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(Error::InvalidParameter(format!("x_max must be positive, got {x_max}")));
    }
    if x_max >= branch.first_integral_limit() {
        return Err(Error::BranchLost(branch.first_integral_limit()));
    }
    let mut xs = vec![0.0];
    let mut ps = vec![0.0];
    let mut dps = vec![branch.alpha()];
    let mut step = STEP;
    while *xs.last().unwrap() < x_max {
        let (x, p, dp) = (*xs.last().unwrap(), *ps.last().unwrap(), *dps.last().unwrap());
        let xn = (x + step).min(x_max);
        let pred = p + (xn - x) * dp;
        let mut ranked = quadratic_zprime(xn)?;
        ranked.sort_by(|a, b| (a - pred).abs().total_cmp(&(b - pred).abs()));
        let accepted = match ranked.as_slice() {
            [] => None,
            [only] => Some(*only),
            [best, second, ..] => {
                let (d1, d2) = ((best - pred).abs(), (second - pred).abs());
                if (best - second).abs() < 1e-9 || d1 < 0.25 * d2 {
                    Some(*best)
                } else {
                    None
                }
            }
        };
        match accepted {
            Some(r) if (r - pred).abs() <= 0.05 * (1.0 + p.abs()) && r.abs() < MAX_SLOPE => {
                xs.push(xn);
                ps.push(r);
                dps.push(tracked_derivative(branch, xn, r));
                step = STEP;
            }
            _ => {
                if step <= MIN_STEP {
                    return Err(Error::BranchLost(xn));
                }
                step *= 0.5;
            }
        }
    }
    Ok(FirstIntegralBranch { branch, xs, ps, dps })
}

impl FirstIntegralBranch {
    pub fn branch(&self) -> AxisBranch {
        self.branch
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    /// Tracked `(x, p)` nodes.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ps.iter().copied())
    }

    /// Slope at `x`: the admitted root closest to the Hermite interpolant of the nodes.
    pub fn slope(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0 && x <= self.x_max()) {
            return Err(Error::OutOfCurveDomain { value: x, lo: 0.0, hi: self.x_max() });
        }
        let i = self.xs.partition_point(|&v| v <= x).clamp(1, self.xs.len() - 1) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let guess = hermite_value(self.xs[i], h, self.ps[i], self.ps[i + 1], self.dps[i], self.dps[i + 1], x);
        quadratic_zprime(x)?
            .into_iter()
            .min_by(|a, b| (a - guess).abs().total_cmp(&(b - guess).abs()))
            .ok_or(Error::BranchLost(x))
    }

    /// Arc-length point at `x` (height set to zero) with `z''` from the conserving flow.
    pub fn arc_point(&self, x: f64) -> Result<ProfilePoint> {
        let p = self.slope(x)?;
        let zpp = tracked_derivative(self.branch, x, p);
        Ok(GraphPoint { x, z: 0.0, zp: p, zpp }.to_profile_point())
    }
}

/// Starting abscissa of [`integrate_first_integral_flow`].
pub const FLOW_START: f64 = 1e-3;

/// Integrates `(z, p)' = (p, W^2 (p + x W) / (2p - x))` from `x = 1e-3` to `x_end`
/// starting on the admitted root of the chosen branch. Independent of the
/// root tracking, so `F` along the result measures integration drift.
pub fn integrate_first_integral_flow(branch: AxisBranch, x_end: f64) -> Result<Trajectory<2, f64>> {
    if !(x_end > FLOW_START && x_end < branch.first_integral_limit()) {
        return Err(Error::InvalidParameter(format!(
            "x_end must lie in ({FLOW_START}, {}), got {x_end}",
            branch.first_integral_limit()
        )));
    }
    let x0 = FLOW_START;
    let target = branch.alpha() * x0;
    let p0 = quadratic_zprime(x0)?
        .into_iter()
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
        .ok_or(Error::NoRoot(x0))?;
    let z0 = 0.5 * branch.alpha() * x0 * x0;
    let rhs = |x: f64, y: &[f64; 2]| [y[1], first_integral_slope_derivative(x, y[1])];
    let stop = |x: f64, y: &[f64; 2]| if y[1].abs() > MAX_SLOPE { Some(x) } else { None };
    let traj = integrate(rhs, x0, [z0, p0], x_end, &OdeOptions::default(), stop);
    match traj.termination {
        Termination::Completed => Ok(traj),
        _ => Err(Error::BranchLost(traj.end())),
    }
}
