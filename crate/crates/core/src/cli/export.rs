//! CSV and Wavefront OBJ writers. Reals are printed with 17 significant
//! digits so that every value round-trips.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::geom::{Differentiation, Patch, Rect};
use crate::profile::ProfilePoint;
use crate::snm::{curvature_at, CanonicalConnection};
use crate::vec3::Vec3;

/// `{:.16e}`: one leading digit plus sixteen decimals.
pub fn real(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Inclusive equispaced samples of `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    Degenerate,
}

/// One grid point of a curvature field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureRow {
    pub s: f64,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub k_tilde: f64,
    pub gaussian: f64,
    pub mean: f64,
    pub c_dot_n: f64,
    pub k: f64,
    pub status: RowStatus,
}

pub const CURVATURE_HEADER: &str = "s,t,x,y,z,K_tilde,G,H,C_dot_N,K,status";

/// Samples the curvature field on an `n_s x n_t` grid, `s`-major. Points where
/// the pipeline fails are kept as `degenerate` rows.
pub fn sample_curvature(
    patch: &dyn Patch,
    rect: Rect,
    n_s: usize,
    n_t: usize,
    conn: &CanonicalConnection,
) -> Vec<CurvatureRow> {
    let ss = linspace(rect.s.0, rect.s.1, n_s);
    let ts = linspace(rect.t.0, rect.t.1, n_t);
    ss.par_iter()
        .flat_map_iter(|&s| {
            ts.iter().map(move |&t| {
                let p = patch.point(s, t);
                match curvature_at(patch, s, t, conn, Differentiation::Auto) {
                    Ok(r) if r.k.is_finite() => CurvatureRow {
                        s,
                        t,
                        x: p.x,
                        y: p.y,
                        z: p.z,
                        k_tilde: r.k_tilde,
                        gaussian: r.gaussian,
                        mean: r.mean,
                        c_dot_n: r.c_dot_n,
                        k: r.k,
                        status: RowStatus::Ok,
                    },
                    _ => CurvatureRow {
                        s,
                        t,
                        x: p.x,
                        y: p.y,
                        z: p.z,
                        k_tilde: f64::NAN,
                        gaussian: f64::NAN,
                        mean: f64::NAN,
                        c_dot_n: f64::NAN,
                        k: f64::NAN,
                        status: RowStatus::Degenerate,
                    },
                }
            })
        })
        .collect()
}

pub fn write_curvature_csv<W: Write>(out: &mut W, rows: &[CurvatureRow]) -> io::Result<()> {
    writeln!(out, "{CURVATURE_HEADER}")?;
    for r in rows {
        let status = match r.status {
            RowStatus::Ok => "ok",
            RowStatus::Degenerate => "degenerate",
        };
        let fields = [r.s, r.t, r.x, r.y, r.z, r.k_tilde, r.gaussian, r.mean, r.c_dot_n, r.k];
        let line: Vec<String> = fields.iter().map(|v| real(*v)).collect();
        writeln!(out, "{},{status}", line.join(","))?;
    }
    Ok(())
}

/// Quad grid of vertices, `s`-major, split into two triangles per cell with
/// counter-clockwise winding about `psi_s x psi_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub n_s: usize,
    pub n_t: usize,
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn sample(patch: &dyn Patch, rect: Rect, n_s: usize, n_t: usize) -> Self {
        let ss = linspace(rect.s.0, rect.s.1, n_s);
        let ts = linspace(rect.t.0, rect.t.1, n_t);
        let vertices: Vec<Vec3> =
            ss.par_iter().flat_map_iter(|&s| ts.iter().map(move |&t| patch.point(s, t))).collect();
        let mut faces = Vec::with_capacity(2 * n_s.saturating_sub(1) * n_t.saturating_sub(1));
        let idx = |i: usize, j: usize| i * n_t + j;
        for i in 0..n_s.saturating_sub(1) {
            for j in 0..n_t.saturating_sub(1) {
                faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
                faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            }
        }
        Self { n_s, n_t, vertices, faces }
    }

    pub fn is_finite(&self) -> bool {
        self.vertices.iter().all(|v| v.is_finite())
    }

    pub fn write_obj<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for v in &self.vertices {
            writeln!(out, "v {} {} {}", real(v.x), real(v.y), real(v.z))?;
        }
        for f in &self.faces {
            writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        Ok(())
    }
}

pub const CURVE_HEADER: &str = "s,x,z,z_prime,kappa";

/// One sample of a generating curve; `z_prime` is `dz/ds` for the curve's own parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub s: f64,
    pub x: f64,
    pub z: f64,
    pub z_prime: f64,
    pub kappa: f64,
}

impl CurveRow {
    pub fn from_profile(s: f64, p: &ProfilePoint) -> Self {
        Self { s, x: p.x, z: p.z, z_prime: p.dz, kappa: p.curvature() }
    }
}

pub fn write_curve_csv<W: Write>(out: &mut W, rows: &[CurveRow]) -> io::Result<()> {
    writeln!(out, "{CURVE_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", real(r.s), real(r.x), real(r.z), real(r.z_prime), real(r.kappa))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PlanePatch;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let text = real(v);
            assert_eq!(text.parse::<f64>().unwrap(), v);
            let mantissa = text.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }

    #[test]
    fn mesh_counts_and_winding() {
        let plane = PlanePatch::horizontal(0.0);
        let mesh = Mesh::sample(&plane, Rect::new((0.0, 1.0), (0.0, 2.0)), 4, 3);
        assert_eq!(mesh.vertices.len(), 12);
        assert_eq!(mesh.faces.len(), 2 * 3 * 2);
        for f in &mesh.faces {
            let [a, b, c] = f.map(|i| mesh.vertices[i]);
            assert!((b - a).cross(c - a).z > 0.0);
        }
        let mut buf = Vec::new();
        mesh.write_obj(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 12);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 12);
    }

    #[test]
    fn linspace_hits_both_ends() {
        let v = linspace(-1.0, 0.3, 7);
        assert_eq!(v[0], -1.0);
        assert_eq!(v[6], 0.3);
    }
}
