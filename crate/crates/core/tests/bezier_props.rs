mod common;

use proptest::prelude::*;

use uavsim::bezier::{build_curve, is_feasible, min_time, BoundaryConditions, KinematicLimits};
use uavsim::PlanarVector;

fn vec_in(span: f64) -> impl Strategy<Value = PlanarVector> {
    (-span..span, -span..span).prop_map(|(x, y)| PlanarVector::new(x, y))
}

fn bc_strategy() -> impl Strategy<Value = BoundaryConditions> {
    (vec_in(3000.0), vec_in(21.0), vec_in(3000.0), vec_in(21.0))
        .prop_map(|(a, va, d, vd)| BoundaryConditions::new(a, va, d, vd))
}

fn rel(a: PlanarVector, b: PlanarVector, scale: f64) -> f64 {
    (a - b).norm() / scale.max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn endpoints_and_boundary_velocities(bc in bc_strategy(), t in 0.5f64..300.0) {
        let c = build_curve(&bc, t).unwrap();
        prop_assert_eq!(c.position(0.0).unwrap(), bc.start_pos);
        prop_assert_eq!(c.position(1.0).unwrap(), bc.end_pos);
        let scale_a = bc.start_vel.norm() + bc.start_pos.max_abs() / t;
        let scale_d = bc.end_vel.norm() + bc.end_pos.max_abs() / t;
        prop_assert!(rel(c.velocity(0.0).unwrap(), bc.start_vel, scale_a) < 1e-9);
        prop_assert!(rel(c.velocity(1.0).unwrap(), bc.end_vel, scale_d) < 1e-9);
    }

    #[test]
    fn position_matches_independent_bernstein_sum(bc in bc_strategy(), t in 0.5f64..300.0, tau in 0.0f64..=1.0) {
        let c = build_curve(&bc, t).unwrap();
        let ctrl = [
            bc.start_pos,
            bc.start_pos + bc.start_vel * (t / 3.0),
            bc.end_pos - bc.end_vel * (t / 3.0),
            bc.end_pos,
        ];
        let expect = common::bernstein_position(&ctrl, tau);
        let scale = ctrl.iter().map(|p| p.max_abs()).fold(1.0, f64::max);
        prop_assert!(rel(c.position(tau).unwrap(), expect, scale) < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences(bc in bc_strategy(), t in 0.5f64..300.0, tau in 0.01f64..0.99) {
        let c = build_curve(&bc, t).unwrap();
        let h = 1e-6;
        let dp = (c.position(tau + h).unwrap() - c.position(tau - h).unwrap()) / (2.0 * h);
        let v = c.velocity(tau).unwrap() * t;
        let pos_scale = [c.p0, c.p1, c.p2, c.p3].iter().map(|p| p.max_abs()).fold(1.0, f64::max);
        prop_assert!((dp - v).norm() <= 1e-5 * v.norm().max(pos_scale * 1e-3), "{dp:?} vs {v:?}");
        let dv = (c.velocity(tau + h).unwrap() - c.velocity(tau - h).unwrap()) / (2.0 * h);
        let a = c.acceleration(tau).unwrap() * t;
        prop_assert!((dv - a).norm() <= 1e-5 * a.norm().max(1e-6 * pos_scale / t), "{dv:?} vs {a:?}");
    }

    #[test]
    fn acceleration_is_affine(bc in bc_strategy(), t in 0.5f64..300.0, u in 0.0f64..1.0, w in 0.0f64..1.0) {
        let c = build_curve(&bc, t).unwrap();
        let a0 = c.acceleration(0.0).unwrap();
        let a1 = c.acceleration(1.0).unwrap();
        for tau in [u, w] {
            let expect = a0 * (1.0 - tau) + a1 * tau;
            let got = c.acceleration(tau).unwrap();
            prop_assert!((got - expect).norm() <= 1e-12 * (a0.norm() + a1.norm()).max(1e-300));
        }
    }

    #[test]
    fn max_accel_equals_dense_grid(bc in bc_strategy(), t in 0.5f64..300.0) {
        let c = build_curve(&bc, t).unwrap();
        let grid = (0..=10_000)
            .map(|i| c.acceleration(i as f64 / 10_000.0).unwrap().norm())
            .fold(0.0, f64::max);
        let (m, tau) = c.max_accel();
        prop_assert!(tau == 0.0 || tau == 1.0);
        prop_assert!((m - grid).abs() <= 1e-9 * grid.max(1e-12));
    }

    #[test]
    fn max_speed_dominates_dense_grid(bc in bc_strategy(), t in 0.5f64..300.0) {
        let c = build_curve(&bc, t).unwrap();
        let grid = (0..=20_000)
            .map(|i| c.velocity(i as f64 / 20_000.0).unwrap().norm())
            .fold(0.0, f64::max);
        let (m, tau) = c.max_speed();
        prop_assert!(m >= grid * (1.0 - 1e-12));
        prop_assert!(m <= grid * (1.0 + 1e-6) + 1e-12);
        prop_assert!((c.velocity(tau).unwrap().norm() - m).abs() <= 1e-9 * m.max(1e-12));
    }

    #[test]
    fn min_time_is_minimal(bc in bc_strategy()) {
        let limits = KinematicLimits::default();
        let r = min_time(&bc, &limits).unwrap();
        prop_assume!(r.feasible && r.t_min > 0.0);
        prop_assert!(is_feasible(&bc, r.t_min, &limits).unwrap());
        prop_assert!(!is_feasible(&bc, r.t_min * (1.0 - 1e-4), &limits).unwrap());
        prop_assert!(is_feasible(&bc, r.t_min * (1.0 + 1e-4), &limits).unwrap());
    }

    #[test]
    fn min_time_scale_covariance(bc in bc_strategy(), s in 0.1f64..10.0) {
        let limits = KinematicLimits::default();
        let base = min_time(&bc, &limits).unwrap();
        prop_assume!(base.feasible);
        let scaled_bc = BoundaryConditions::new(bc.start_pos * s, bc.start_vel * s, bc.end_pos * s, bc.end_vel * s);
        let scaled = min_time(&scaled_bc, &KinematicLimits::new(limits.v_max * s, limits.a_max * s).unwrap()).unwrap();
        prop_assert!(scaled.feasible);
        prop_assert!((scaled.t_min - base.t_min).abs() <= 1e-6 * base.t_min);
    }
}

#[test]
fn rest_to_rest_matches_closed_form() {
    let limits = KinematicLimits::default();
    let mut r = common::rng(5);
    for _ in 0..200 {
        let a = common::point(&mut r, 4000.0);
        let d = common::point(&mut r, 4000.0);
        let got = min_time(&BoundaryConditions::rest_to_rest(a, d), &limits).unwrap();
        let expect = common::rest_to_rest_time(a.distance(d), limits.v_max, limits.a_max);
        assert!((got.t_min - expect).abs() <= 1e-5 * expect, "{} vs {expect}", got.t_min);
    }
}
