//! Embedded Dormand-Prince 5(4) integrator with continuous (dense) output.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            initial_step: 1e-3,
            min_step: 1e-14,
            max_step: 0.05,
            max_steps: 1_000_000,
        }
    }
}

/// Why an integration finished.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination<S> {
    /// Reached the requested end point.
    Completed,
    /// The caller's stop predicate fired after an accepted step.
    Stopped(S),
    /// Step size fell below `min_step` (typically a singularity of the field).
    StepUnderflow,
    MaxSteps,
}

#[derive(Debug, Clone)]
struct DenseSegment<const N: usize> {
    t0: f64,
    h: f64,
    coeffs: [[f64; N]; 5],
}

/// Accepted nodes plus the piecewise quartic interpolant between them.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize, S> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    segments: Vec<DenseSegment<N>>,
    pub termination: Termination<S>,
}

impl<const N: usize, S> Trajectory<N, S> {
    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        *self.times.last().expect("trajectory has an initial node")
    }

    pub fn final_state(&self) -> [f64; N] {
        *self.states.last().expect("trajectory has an initial node")
    }

    /// Dense-output state at `t`, clamped to the integrated interval.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.segments.is_empty() {
            return self.states[0];
        }
        let forward = self.end() >= self.start();
        let idx = self
            .segments
            .partition_point(|seg| if forward { seg.t0 + seg.h <= t } else { seg.t0 + seg.h >= t })
            .min(self.segments.len() - 1);
        let seg = &self.segments[idx];
        let theta = ((t - seg.t0) / seg.h).clamp(0.0, 1.0);
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &seg.coeffs;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
        out
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn all_finite<const N: usize>(v: &[f64; N]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t_end` (either direction).
///
/// `stop` is consulted after every accepted step; returning `Some` ends the
/// integration at that node.
pub fn integrate<const N: usize, S, F, P>(
    rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
    mut stop: P,
) -> Trajectory<N, S>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    P: FnMut(f64, &[f64; N]) -> Option<S>,
{
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut traj = Trajectory {
        times: vec![t0],
        states: vec![y0],
        segments: Vec::new(),
        termination: Termination::Completed,
    };
    if t_end == t0 {
        return traj;
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = opts.initial_step.min(opts.max_step).min((t_end - t0).abs());
    let mut steps = 0usize;

    loop {
        if steps >= opts.max_steps {
            traj.termination = Termination::MaxSteps;
            return traj;
        }
        steps += 1;
        let remaining = (t_end - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = dir * h;
        let k2 = rhs(t + C2 * hs, &combine(&y, hs, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * hs, &combine(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * hs, &combine(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * hs,
            &combine(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + hs,
            &combine(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = combine(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = rhs(t + hs, &y_new);

        let mut err_sq = 0.0;
        for i in 0..N {
            let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();

        if !err.is_finite() || !all_finite(&y_new) || !all_finite(&k7) || err > 1.0 {
            let factor = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h *= factor;
            if h < opts.min_step {
                traj.termination = Termination::StepUnderflow;
                return traj;
            }
            continue;
        }

        let mut coeffs = [[0.0; N]; 5];
        for i in 0..N {
            let dy = y_new[i] - y[i];
            let bspl = hs * k1[i] - dy;
            coeffs[0][i] = y[i];
            coeffs[1][i] = dy;
            coeffs[2][i] = bspl;
            coeffs[3][i] = dy - hs * k7[i] - bspl;
            coeffs[4][i] =
                hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        traj.segments.push(DenseSegment { t0: t, h: hs, coeffs });

        t = if last { t_end } else { t + hs };
        y = y_new;
        k1 = k7;
        traj.times.push(t);
        traj.states.push(y);

        if let Some(reason) = stop(t, &y) {
            traj.termination = Termination::Stopped(reason);
            return traj;
        }
        if last {
            traj.termination = Termination::Completed;
            return traj;
        }
        let factor = if err > 0.0 { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) } else { 5.0 };
        h = (h * factor).min(opts.max_step);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let traj = integrate(
            |_t, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            20.0,
            &OdeOptions::default(),
            |_, _| None::<()>,
        );
        assert_eq!(traj.termination, Termination::Completed);
        let end = traj.final_state();
        assert!((end[0] - 20f64.cos()).abs() < 1e-8);
        for (t, y) in traj.times.iter().zip(&traj.states) {
            assert!((y[0] * y[0] + y[1] * y[1] - 1.0).abs() < 1e-9, "t = {t}");
        }
        // dense output between nodes
        for i in 0..200 {
            let t = 0.1 * i as f64 + 0.013;
            let y = traj.eval(t);
            assert!((y[0] - t.cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn backward_integration() {
        let traj = integrate(|_t, y: &[f64; 1]| [y[0]], 0.0, [1.0], -2.0, &OdeOptions::default(), |_, _| None::<()>);
        assert!((traj.final_state()[0] - (-2f64).exp()).abs() < 1e-10);
        assert!((traj.eval(-1.3)[0] - (-1.3f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn stop_predicate_ends_the_run() {
        let traj = integrate(
            |_t, _y: &[f64; 1]| [1.0],
            0.0,
            [0.0],
            10.0,
            &OdeOptions::default(),
            |_, y| (y[0] > 1.0).then_some("crossed"),
        );
        assert_eq!(traj.termination, Termination::Stopped("crossed"));
        assert!(traj.end() > 1.0 && traj.end() < 1.1);
    }

    #[test]
    fn blow_up_is_a_step_underflow() {
        // y' = y^2, y(0) = 1 blows up at t = 1
        let traj = integrate(|_t, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], 2.0, &OdeOptions::default(), |_, _| None::<()>);
        assert!(matches!(traj.termination, Termination::StepUnderflow | Termination::MaxSteps));
        assert!(traj.end() < 1.0);
    }
}
