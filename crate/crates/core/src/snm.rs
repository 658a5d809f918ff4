//! The canonical semi-symmetric non-metric connection on Euclidean 3-space.
//!
//! For constant vector fields the connection acts as `nabla_X Y = <C, Y> X`
//! (the Levi-Civita part vanishes), so every ambient quantity reduces to
//! inner products with the unit field `C`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    classical_curvatures, fundamental_forms, jet_with, ClassicalCurvatures, Differentiation,
    Patch, SurfaceJet2,
};
use crate::vec3::Vec3;

/// Connection determined by a unit constant vector field `C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalConnection {
    c: Vec3,
}

impl CanonicalConnection {
    /// Normalizes `c`; fails for zero or non-finite input.
    pub fn new(c: Vec3) -> Result<Self> {
        c.normalized().map(|c| Self { c }).ok_or(Error::ZeroVectorField)
    }

    /// The field `C = d/dz`.
    pub fn vertical() -> Self {
        Self { c: Vec3::Z }
    }

    pub fn field(&self) -> Vec3 {
        self.c
    }

    /// `nabla_X Y` for constant vector fields `X`, `Y`.
    pub fn covariant_derivative(&self, x: Vec3, y: Vec3) -> Vec3 {
        x * self.c.dot(y)
    }

    /// Torsion `T(X, Y) = <C, Y> X - <C, X> Y`.
    pub fn torsion(&self, x: Vec3, y: Vec3) -> Vec3 {
        x * self.c.dot(y) - y * self.c.dot(x)
    }
}

/// A 2-plane given by a spanning pair of vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneSection {
    pub u: Vec3,
    pub v: Vec3,
}

impl PlaneSection {
    pub fn new(u: Vec3, v: Vec3) -> Self {
        Self { u, v }
    }

    /// Gram determinant `|u|^2 |v|^2 - <u, v>^2`, evaluated as `|u x v|^2`.
    pub fn gram(&self) -> f64 {
        self.u.cross(self.v).norm_squared()
    }

    pub fn unit_normal(&self) -> Option<Vec3> {
        self.u.cross(self.v).normalized()
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        (self.u.norm_squared() - 1.0).abs() <= tol
            && (self.v.norm_squared() - 1.0).abs() <= tol
            && self.u.dot(self.v).abs() <= tol
    }
}

/// Sectional curvature of the plane `span{u, v}` with respect to the connection.
///
/// The symmetrized curvature numerator over `2 (|u|^2 |v|^2 - <u,v>^2)` equals
/// `|n x C|^2 / (2 |n|^2)` with `n = u x v`, which is what is evaluated here
/// (no cancellation, and any basis of the plane gives the same value). For an
/// orthonormal basis it reduces to `(<u, C>^2 + <v, C>^2) / 2`.
pub fn ambient_sectional_curvature(plane: &PlaneSection, conn: &CanonicalConnection) -> Result<f64> {
    let n = plane.u.cross(plane.v);
    let gram = n.norm_squared();
    let scale = plane.u.norm_squared() * plane.v.norm_squared();
    if !(gram > 1e-12 * scale) || !gram.is_finite() {
        return Err(Error::DegenerateBasis(gram));
    }
    Ok((n.cross(conn.field()).norm_squared() / (2.0 * gram)).clamp(0.0, 0.5))
}

/// Sum of the sectional curvatures of the three coordinate planes of an orthonormal frame.
pub fn scalar_curvature(frame: [Vec3; 3], conn: &CanonicalConnection) -> Result<f64> {
    const TOL: f64 = 1e-9;
    let mut deviation: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((frame[i].dot(frame[j]) - target).abs());
        }
    }
    if !(deviation <= TOL) {
        return Err(Error::NonOrthonormalFrame(deviation));
    }
    let [a, b, c] = frame;
    Ok(ambient_sectional_curvature(&PlaneSection::new(a, b), conn)?
        + ambient_sectional_curvature(&PlaneSection::new(a, c), conn)?
        + ambient_sectional_curvature(&PlaneSection::new(b, c), conn)?)
}

/// The pointwise bundle `(K~, G, H, <C, N>, K)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub k_tilde: f64,
    pub gaussian: f64,
    pub mean: f64,
    pub c_dot_n: f64,
    pub k: f64,
}

/// Sectional curvature of a surface: `K = K~ + G - <C, N> H`, with `K~` the
/// ambient curvature of the tangent plane.
pub fn surface_sectional_curvature(
    curvatures: &ClassicalCurvatures,
    tangent_plane: &PlaneSection,
    conn: &CanonicalConnection,
) -> Result<CurvatureReport> {
    let k_tilde = ambient_sectional_curvature(tangent_plane, conn)?;
    let c_dot_n = conn.field().dot(curvatures.normal);
    Ok(CurvatureReport {
        k_tilde,
        gaussian: curvatures.gaussian,
        mean: curvatures.mean,
        c_dot_n,
        k: k_tilde + curvatures.gaussian - c_dot_n * curvatures.mean,
    })
}

/// Full pipeline from a jet: fundamental forms, G and H, then `K`.
pub fn curvature_from_jet(jet: &SurfaceJet2, conn: &CanonicalConnection) -> Result<CurvatureReport> {
    let curvatures = classical_curvatures(&fundamental_forms(jet)?)?;
    surface_sectional_curvature(&curvatures, &PlaneSection::new(jet.ds, jet.dt), conn)
}

/// Full pipeline at a parameter point of a patch.
pub fn curvature_at<P: Patch + ?Sized>(
    patch: &P,
    s: f64,
    t: f64,
    conn: &CanonicalConnection,
    mode: Differentiation,
) -> Result<CurvatureReport> {
    curvature_from_jet(&jet_with(patch, s, t, mode)?, conn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{FnPatch, PlanePatch, Rect, SpherePatch};
    use proptest::prelude::*;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn unit_vec() -> impl Strategy<Value = Vec3> {
        (0.0..std::f64::consts::TAU, -1.0..1.0f64).prop_map(|(phi, z)| {
            let r = (1.0 - z * z).sqrt();
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
    }

    fn vec3() -> impl Strategy<Value = Vec3> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
    }

    /// Curvature tensor route: `R(u,v)v = nabla_u nabla_v v - nabla_v nabla_u v`
    /// for constant fields (the bracket vanishes), assembled through the
    /// symmetrized quotient.
    fn tensor_route(u: Vec3, v: Vec3, conn: &CanonicalConnection) -> f64 {
        let nabla = |x: Vec3, y: Vec3| conn.covariant_derivative(x, y);
        let r_uvv = nabla(u, nabla(v, v)) - nabla(v, nabla(u, v));
        let r_vuu = nabla(v, nabla(u, u)) - nabla(u, nabla(v, u));
        (r_uvv.dot(u) + r_vuu.dot(v)) / (2.0 * (u.norm_squared() * v.norm_squared() - u.dot(v).powi(2)))
    }

    #[test]
    fn prop_examples() {
        let c = CanonicalConnection::vertical();
        let k = |u, v| ambient_sectional_curvature(&PlaneSection::new(u, v), &c).unwrap();
        assert_eq!(k(Vec3::X, Vec3::Y), 0.0);
        assert_eq!(k(Vec3::X, Vec3::Z), 0.5);
        assert!((k(Vec3::X, Vec3::new(0.0, SQRT_HALF, SQRT_HALF)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn degenerate_basis_is_rejected() {
        let c = CanonicalConnection::vertical();
        let plane = PlaneSection::new(Vec3::X, Vec3::X * 3.0);
        assert!(matches!(ambient_sectional_curvature(&plane, &c), Err(Error::DegenerateBasis(_))));
        assert!(matches!(CanonicalConnection::new(Vec3::ZERO), Err(Error::ZeroVectorField)));
    }

    #[test]
    fn scalar_curvature_examples() {
        let c = CanonicalConnection::vertical();
        assert!((scalar_curvature([Vec3::X, Vec3::Y, Vec3::Z], &c).unwrap() - 1.0).abs() < 1e-15);
        let cx = CanonicalConnection::new(Vec3::X).unwrap();
        let k12 = ambient_sectional_curvature(&PlaneSection::new(Vec3::X, Vec3::Y), &cx).unwrap();
        let k13 = ambient_sectional_curvature(&PlaneSection::new(Vec3::X, Vec3::Z), &cx).unwrap();
        let k23 = ambient_sectional_curvature(&PlaneSection::new(Vec3::Y, Vec3::Z), &cx).unwrap();
        assert_eq!((k12, k13, k23), (0.5, 0.5, 0.0));
        assert!(matches!(
            scalar_curvature([Vec3::X, Vec3::Y, Vec3::X], &c),
            Err(Error::NonOrthonormalFrame(_))
        ));
    }

    #[test]
    fn torsion_examples() {
        let c = CanonicalConnection::vertical();
        assert_eq!(c.torsion(Vec3::X, Vec3::Z), Vec3::X);
        let v = Vec3::new(0.3, -2.0, 1.1);
        assert_eq!(c.torsion(v, v), Vec3::ZERO);
        let d = CanonicalConnection::new(Vec3::new(1.0, 1.0, 1.0)).unwrap();
        let r3 = 1.0 / 3f64.sqrt();
        assert!((d.torsion(Vec3::Y, Vec3::X) - Vec3::new(-r3, r3, 0.0)).max_abs() < 1e-15);
    }

    #[test]
    fn plane_patches_have_k_equal_k_tilde() {
        let c = CanonicalConnection::new(Vec3::new(0.2, -0.4, 0.9)).unwrap();
        let plane = PlanePatch { origin: Vec3::new(1.0, 2.0, 3.0), u: Vec3::new(1.0, 0.5, 0.0), v: Vec3::new(0.0, 1.0, 2.0) };
        let r = curvature_at(&plane, 0.4, -0.7, &c, Differentiation::Auto).unwrap();
        assert_eq!(r.k, r.k_tilde);
        assert!((0.0..=0.5).contains(&r.k));
    }

    #[test]
    fn cylinder_parallel_to_c_has_half() {
        let cyl = FnPatch::new(|s: f64, t: f64| Vec3::new(s.cos(), s.sin(), t), Rect::unbounded());
        let c = CanonicalConnection::vertical();
        for i in 0..10 {
            let s = 0.6 * i as f64;
            let r = curvature_at(&cyl, s, 0.3 * i as f64, &c, Differentiation::Auto).unwrap();
            assert!((r.k - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn sphere_equator_is_three_halves() {
        let sphere = SpherePatch { radius: 1.0 };
        let r = curvature_at(&sphere, std::f64::consts::FRAC_PI_2, 0.0, &CanonicalConnection::vertical(), Differentiation::Auto)
            .unwrap();
        assert!(r.c_dot_n.abs() < 1e-15);
        assert!((r.k_tilde - 0.5).abs() < 1e-15);
        assert!((r.gaussian - 1.0).abs() < 1e-15);
        assert!((r.k - 1.5).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn basis_change_invariance(u in vec3(), v in vec3(), c in unit_vec(),
                                   m in proptest::array::uniform4(-2.0..2.0f64)) {
            let plane = PlaneSection::new(u, v);
            prop_assume!(plane.gram() > 1e-3 * u.norm_squared() * v.norm_squared());
            let det = m[0] * m[3] - m[1] * m[2];
            prop_assume!(det.abs() > 0.2);
            let conn = CanonicalConnection::new(c).unwrap();
            let other = PlaneSection::new(u * m[0] + v * m[1], u * m[2] + v * m[3]);
            let a = ambient_sectional_curvature(&plane, &conn).unwrap();
            let b = ambient_sectional_curvature(&other, &conn).unwrap();
            prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            prop_assert!((0.0..=0.5).contains(&a));
            // independent routes: curvature tensor and the plane normal
            prop_assert!((a - tensor_route(u, v, &conn)).abs() < 1e-12);
            let n = plane.unit_normal().unwrap();
            prop_assert!((a - (1.0 - n.dot(conn.field()).powi(2)) / 2.0).abs() < 1e-12);
        }

        #[test]
        fn torsion_antisymmetry_and_difference(x in vec3(), y in vec3(), c in unit_vec()) {
            let conn = CanonicalConnection::new(c).unwrap();
            let t = conn.torsion(x, y);
            prop_assert!((t + conn.torsion(y, x)).max_abs() < 1e-12);
            let diff = conn.covariant_derivative(x, y) - conn.covariant_derivative(y, x);
            prop_assert!((t - diff).max_abs() < 1e-12);
        }

        #[test]
        fn non_metricity(x in vec3(), y in vec3(), z in vec3(), c in unit_vec()) {
            let conn = CanonicalConnection::new(c).unwrap();
            let c = conn.field();
            // X<Y,Z> vanishes for constant fields
            let lhs = -conn.covariant_derivative(x, y).dot(z) - y.dot(conn.covariant_derivative(x, z));
            let rhs = -c.dot(y) * x.dot(z) - c.dot(z) * x.dot(y);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
