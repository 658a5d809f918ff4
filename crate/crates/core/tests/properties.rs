use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use snm_surfaces::cli::export::{real, Mesh};
use snm_surfaces::cylindrical::{cylinder_k, solve_generating_curve, CylinderSpec};
use snm_surfaces::geom::{finite_difference_jet2, Differentiation, Patch, Rect};
use snm_surfaces::graph_pde::{pde_residual, SeparableSolution};
use snm_surfaces::profile::{AnalyticProfile, ProfileCurve};
use snm_surfaces::rotational::{
    first_integral, fourier_coefficients, quadratic_zprime, rotational_k_axis_aligned, rotational_k_general,
    RotationalSurface, ADMISSION_TOL,
};
use snm_surfaces::snm::curvature_at;
use snm_surfaces::{CanonicalConnection, Vec3};

fn unit_vec() -> impl Strategy<Value = Vec3> {
    (0.0..std::f64::consts::TAU, -1.0..1.0f64).prop_map(|(phi, z)| {
        let r = (1.0 - z * z).sqrt();
        Vec3::new(r * phi.cos(), r * phi.sin(), z)
    })
}

fn profile() -> impl Strategy<Value = AnalyticProfile> {
    prop_oneof![
        (2.0..4.0f64, -1.0..1.0f64, 0.2..3.0f64).prop_map(|(c1, c2, theta)| AnalyticProfile::Line { c1, c2, theta }),
        (0.3..1.5f64, 1.0..3.0f64, 0.0..std::f64::consts::TAU)
            .prop_map(|(r, gap, phase)| AnalyticProfile::Circle { c1: r + gap, c2: 0.0, r, phase }),
        (0.5..2.0f64).prop_map(|a| AnalyticProfile::Catenary { a, z0: 0.0 }),
        (2.0..4.0f64).prop_map(|offset| AnalyticProfile::GrimReaper { offset }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rotational_k_matches_pipeline(p in profile(), c in unit_vec(), s in -0.9..0.9f64, t in -PI..PI) {
        let surf = RotationalSurface::new(p);
        let conn = CanonicalConnection::new(c).unwrap();
        let closed = rotational_k_general(&surf, &conn, s, t).unwrap();
        let pipe = curvature_at(&surf, s, t, &conn, Differentiation::Auto).unwrap();
        prop_assert!((closed - pipe.k).abs() < 1e-9);
        let fd = curvature_at(&surf, s, t, &conn, Differentiation::FiniteDifference(None)).unwrap();
        prop_assert!((closed - fd.k).abs() < 1e-6);
    }

    #[test]
    fn axis_aligned_k_is_rotation_invariant(p in profile(), s in -0.9..0.9f64, t in -PI..PI, up in any::<bool>()) {
        let surf = RotationalSurface::new(p);
        let conn = CanonicalConnection::new(Vec3::new(0.0, 0.0, if up { 1.0 } else { -1.0 })).unwrap();
        let k0 = rotational_k_general(&surf, &conn, s, 0.0).unwrap();
        prop_assert!((rotational_k_general(&surf, &conn, s, t).unwrap() - k0).abs() < 1e-12);
        if up {
            prop_assert!((rotational_k_axis_aligned(&surf, s).unwrap() - k0).abs() < 1e-12);
        }
        let f = fourier_coefficients(&surf, &conn, s).unwrap();
        prop_assert!(f.fitted.max_oscillating() < 1e-12);
    }

    #[test]
    fn cylinders_ruled_along_c_have_half(p in profile(), c in unit_vec(), a in unit_vec(), s in -1.0..1.0f64) {
        prop_assume!(a.cross(c).norm() > 0.1);
        let spec = CylinderSpec::new(c, a, p).unwrap();
        let conn = CanonicalConnection::new(c).unwrap();
        prop_assert!((cylinder_k(&spec, &conn, s).unwrap() - 0.5).abs() < 1e-12);
        prop_assert!((spec.orientation(s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generating_curves_are_unit_speed(k in -1.5..1.5f64, u in 0.05..0.95f64) {
        let curve = solve_generating_curve(k).unwrap();
        let d = curve.domain();
        let (lo, hi) = if d.hi.is_finite() { (d.lo.max(-3.0), d.hi) } else { (d.lo.max(-3.0), d.lo.max(-3.0) + 4.0) };
        let s = lo + u * (hi - lo);
        let p = curve.eval(s).unwrap();
        prop_assert!(p.speed_defect().abs() < 1e-9);
        prop_assert!((p.ddz - p.dz * p.dz + 2.0 * k).abs() < 1e-9);
        let spec = CylinderSpec::standard(&curve);
        prop_assert!((cylinder_k(&spec, &CanonicalConnection::vertical(), s).unwrap() - k).abs() < 1e-9);
    }

    #[test]
    fn separable_graphs_solve_the_pde(c in prop_oneof![-3.0..-0.1f64, 0.6..3.0f64], u in -0.8..0.8f64, v in -0.8..0.8f64) {
        let g = SeparableSolution::new(c).unwrap();
        let (hx, hy) = g.half_widths();
        let r = pde_residual(&g, u * hx, v * hy).unwrap();
        prop_assert!(r.abs() < 1e-9, "{r}");
    }

    #[test]
    fn admitted_slopes_satisfy_the_first_integral(x in 0.0..3.4f64) {
        for p in quadratic_zprime(x).unwrap() {
            prop_assert!(first_integral(x, p).abs() < ADMISSION_TOL);
        }
    }

    #[test]
    fn finite_difference_jets_are_second_order(p in profile(), s in -0.5..0.5f64, t in -1.0..1.0f64) {
        let surf = RotationalSurface::new(p);
        let exact = surf.analytic_jet(s, t).unwrap();
        let e1 = finite_difference_jet2(&surf, s, t, 1e-2).unwrap().max_derivative_diff(&exact);
        let e2 = finite_difference_jet2(&surf, s, t, 5e-3).unwrap().max_derivative_diff(&exact);
        prop_assume!(e1 > 1e-9);
        let ratio = e1 / e2;
        prop_assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn meshes_have_expected_counts(n_s in 2usize..12, n_t in 2usize..12) {
        let mesh = Mesh::sample(&snm_surfaces::geom::SpherePatch { radius: 1.0 }, Rect::new((0.1, 3.0), (-PI, PI)), n_s, n_t);
        prop_assert_eq!(mesh.vertices.len(), n_s * n_t);
        prop_assert_eq!(mesh.faces.len(), 2 * (n_s - 1) * (n_t - 1));
        prop_assert!(mesh.faces.iter().flatten().all(|&i| i < n_s * n_t));
    }

    #[test]
    fn printed_reals_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(real(v).parse::<f64>().unwrap(), v);
    }
}

#[test]
fn mesh_winding_follows_the_patch_normal() {
    let surf = RotationalSurface::new(AnalyticProfile::sphere(1.0));
    let (n_s, n_t) = (9, 17);
    let rect = Rect::new((0.3, 2.8), (-PI, PI));
    let mesh = Mesh::sample(&surf, rect, n_s, n_t);
    for (k, f) in mesh.faces.iter().enumerate() {
        let cell = k / 2;
        let (i, j) = (cell / (n_t - 1), cell % (n_t - 1));
        let s = rect.s.0 + (rect.s.1 - rect.s.0) * (i as f64 + 0.5) / (n_s - 1) as f64;
        let t = rect.t.0 + (rect.t.1 - rect.t.0) * (j as f64 + 0.5) / (n_t - 1) as f64;
        let jet = surf.analytic_jet(s, t).unwrap();
        let [a, b, c] = f.map(|i| mesh.vertices[i]);
        assert!((b - a).cross(c - a).dot(jet.ds.cross(jet.dt)) > 0.0, "face {k}");
    }
    // this meridian runs upward, so psi_s x psi_t points into the ball
    let jet = surf.analytic_jet(FRAC_PI_2, 0.0).unwrap();
    assert!((jet.ds.cross(jet.dt).normalized().unwrap() + Vec3::X).norm() < 1e-15);
}
