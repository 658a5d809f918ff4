//! Least-squares fits of trigonometric polynomials
//! `a0 + sum_{n=1..order} (a_n cos(n t) + b_n sin(n t))`.

use nalgebra::{DMatrix, DVector};

/// Samples per period used by the curvature fits.
pub const DEFAULT_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct TrigFit {
    /// `cos[n]` multiplies `cos(n t)`; `cos[0]` is the constant term.
    pub cos: Vec<f64>,
    /// `sin[n]` multiplies `sin(n t)`; `sin[0]` is always zero.
    pub sin: Vec<f64>,
    /// Largest absolute residual at the samples.
    pub max_residual: f64,
}

impl TrigFit {
    pub fn order(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        (0..=self.order())
            .map(|n| {
                let (s, c) = (n as f64 * t).sin_cos();
                self.cos[n] * c + self.sin[n] * s
            })
            .sum()
    }
}

/// Least-squares fit through `order` of arbitrary `(t, value)` samples.
pub fn fit_samples(samples: &[(f64, f64)], order: usize) -> TrigFit {
    let cols = 2 * order + 1;
    assert!(samples.len() >= cols, "need at least {cols} samples for order {order}");
    let design = DMatrix::from_fn(samples.len(), cols, |r, c| {
        let t = samples[r].0;
        match c {
            0 => 1.0,
            c if c % 2 == 1 => (c.div_ceil(2) as f64 * t).cos(),
            c => ((c / 2) as f64 * t).sin(),
        }
    });
    let rhs = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let svd = design.clone().svd(true, true);
    let coef = svd.solve(&rhs, 1e-14).expect("SVD was computed with both factors");
    let residual = &design * &coef - &rhs;

    let mut cos = vec![0.0; order + 1];
    let mut sin = vec![0.0; order + 1];
    cos[0] = coef[0];
    for n in 1..=order {
        cos[n] = coef[2 * n - 1];
        sin[n] = coef[2 * n];
    }
    TrigFit { cos, sin, max_residual: residual.amax() }
}

/// Fit of a `2 pi`-periodic function sampled at `n_samples` equispaced points.
pub fn fit_periodic<F: Fn(f64) -> f64>(f: F, n_samples: usize, order: usize) -> TrigFit {
    let samples: Vec<(f64, f64)> = (0..n_samples)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n_samples as f64;
            (t, f(t))
        })
        .collect();
    fit_samples(&samples, order)
}
