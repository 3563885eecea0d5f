use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use spheregap_core::deformation::{
    apex_offset, first_order_operator_apply, round_laplacian, side_distance, Deformation,
};
use spheregap_core::variation::TriangleMode;
use spheregap_core::{CoordPoint, DeformationParams, Direction};

fn direction() -> impl Strategy<Value = Direction> {
    (0.0f64..=FRAC_PI_2).prop_map(|phi| Direction::from_angle(phi).unwrap())
}

fn point() -> impl Strategy<Value = CoordPoint> {
    (0.01f64..FRAC_PI_2 - 0.01, 0.01f64..FRAC_PI_2 - 0.01).prop_map(|(r, theta)| CoordPoint { r, theta })
}

/// Laplace–Beltrami operator of `g_t` applied to an analytic mode:
/// `(1/√g) ∂_i(√g g^{ij} ∂_j u)` with the outer derivative by central differences.
fn deformed_laplacian(d: &Deformation, mode: TriangleMode, p: CoordPoint, h: f64) -> f64 {
    let flux = |r: f64, theta: f64| {
        let (_, [arr, art, att]) = d.weak_form_coefficients(CoordPoint { r, theta });
        let jet = mode.jet(r, theta);
        (arr * jet.d_r + art * jet.d_theta, art * jet.d_r + att * jet.d_theta)
    };
    let div = (flux(p.r + h, p.theta).0 - flux(p.r - h, p.theta).0) / (2.0 * h)
        + (flux(p.r, p.theta + h).1 - flux(p.r, p.theta - h).1) / (2.0 * h);
    div / d.weak_form_coefficients(p).0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobian_matches_finite_differences(dir in direction(), t in 0.0f64..0.5, p in point()) {
        let d = Deformation::new(DeformationParams::new(dir, t).unwrap());
        let h = 1e-6;
        let j = d.jacobian(p);
        let at = |r: f64, theta: f64| d.map(CoordPoint { r, theta });
        let (fr_p, fr_m) = (at(p.r + h, p.theta), at(p.r - h, p.theta));
        let (ft_p, ft_m) = (at(p.r, p.theta + h), at(p.r, p.theta - h));
        let fd = [
            [(fr_p.r - fr_m.r) / (2.0 * h), (ft_p.r - ft_m.r) / (2.0 * h)],
            [(fr_p.theta - fr_m.theta) / (2.0 * h), (ft_p.theta - ft_m.theta) / (2.0 * h)],
        ];
        for a in 0..2 {
            for b in 0..2 {
                prop_assert!((fd[a][b] - j[a][b]).abs() < 1e-7, "J[{a}][{b}]: {} vs {}", fd[a][b], j[a][b]);
            }
        }
    }

    #[test]
    fn metric_determinant_matches_closed_form(dir in direction(), t in 0.0f64..0.5, p in point()) {
        let d = Deformation::new(DeformationParams::new(dir, t).unwrap());
        let g = d.pullback_metric(p).unwrap();
        let closed = d.metric_determinant(p);
        prop_assert!((g.det() - closed).abs() < 1e-12);
        prop_assert!(g.is_positive_definite());
    }

    #[test]
    fn hypotenuse_image_satisfies_side_relation(dir in direction(), t in 0.0f64..0.5, theta in 0.0f64..FRAC_PI_2) {
        let params = DeformationParams::new(dir, t).unwrap();
        let d = Deformation::new(params);
        let image = d.map(CoordPoint { r: FRAC_PI_2, theta });
        let z = apex_offset(&params);
        prop_assert!((FRAC_PI_2 - image.r - side_distance(z, image.theta)).abs() < 1e-10);
        let bottom = d.map(CoordPoint { r: 0.7 * FRAC_PI_2, theta: 0.0 });
        prop_assert_eq!(bottom.theta, 0.0);
    }
}

#[test]
fn map_is_injective_for_small_t() {
    for dir in [(1.0, 0.0), (0.0, 1.0), (0.6, 0.8), (0.8, 0.6)] {
        let d = Deformation::new(DeformationParams::new(Direction::new(dir.0, dir.1).unwrap(), 0.2).unwrap());
        let mut min_det = f64::INFINITY;
        let h = 1e-6;
        for i in 0..100 {
            for k in 0..100 {
                let r = (i as f64 + 0.5) / 100.0 * FRAC_PI_2;
                let theta = (k as f64 + 0.5) / 100.0 * FRAC_PI_2;
                let at = |r: f64, theta: f64| d.map(CoordPoint { r, theta });
                let (a, b) = (at(r + h, theta), at(r - h, theta));
                let (c, e) = (at(r, theta + h), at(r, theta - h));
                let det = ((a.r - b.r) * (c.theta - e.theta) - (c.r - e.r) * (a.theta - b.theta)) / (4.0 * h * h);
                min_det = min_det.min(det);
            }
        }
        assert!(min_det > 0.0, "{dir:?}: {min_det}");
    }
}

#[test]
fn edge_slope_first_order_asymptotics() {
    let dir = Direction::new(0.6, 0.8).unwrap();
    let edge = |t: f64, theta: f64| Deformation::new(DeformationParams::new(dir, t).unwrap()).edge_profile(theta);
    for theta in [0.1, 0.6, 1.2, 1.5] {
        let rich = |f: &dyn Fn(f64) -> f64| {
            let (t1, t2) = (1e-3, 5e-4);
            2.0 * f(t2) - f(t1)
        };
        let l_over_t = rich(&|t| edge(t, theta).dl_dtheta / t);
        assert!((l_over_t - dir.b() * theta.cos()).abs() < 1e-6, "θ = {theta}");
        let h = 1e-5;
        let dl_over_t = rich(&|t| (edge(t, theta + h).dl_dtheta - edge(t, theta - h).dl_dtheta) / (2.0 * h * t));
        assert!((dl_over_t + dir.b() * theta.sin()).abs() < 1e-5, "θ = {theta}");
    }
}

#[test]
fn first_order_operator_is_the_derivative_of_the_laplacian() {
    for (a, b) in [(0.0, 1.0), (1.0, 0.0), (0.6, 0.8)] {
        let dir = Direction::new(a, b).unwrap();
        for mode in TriangleMode::ALL {
            for &(r, theta) in &[(0.4, 0.3), (0.9, 1.1), (1.3, 0.7)] {
                let p = CoordPoint { r, theta };
                let round = round_laplacian(&mode.jet(r, theta), r);
                let quotient = |t: f64| {
                    let d = Deformation::new(DeformationParams::new(dir, t).unwrap());
                    (deformed_laplacian(&d, mode, p, 1e-5) - round) / t
                };
                let (t1, t2) = (2e-3, 1e-3);
                let extrapolated = 2.0 * quotient(t2) - quotient(t1);
                let l1 = first_order_operator_apply(dir, &mode.jet(r, theta), p).unwrap();
                let scale = 1.0 + l1.abs();
                assert!(
                    (extrapolated - l1).abs() < 1e-3 * scale,
                    "{mode} ({a}, {b}) at ({r}, {theta}): {extrapolated} vs {l1}"
                );
            }
        }
    }
}

#[test]
fn amplitude_and_apex() {
    let p = DeformationParams::new(Direction::new(0.6, 0.8).unwrap(), 0.25).unwrap();
    assert!((p.amplitude() - 2.0 * 0.6 * 0.25 / PI).abs() < 1e-16);
    let apex = p.apex();
    assert!((apex.r - (FRAC_PI_2 - 0.2)).abs() < 1e-15);
    assert!((apex.theta - (FRAC_PI_2 - 0.15)).abs() < 1e-15);
}
