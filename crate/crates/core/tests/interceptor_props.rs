mod common;

use proptest::prelude::*;

use uavsim::interceptor::{self, InterceptorParams, InterceptorState};
use uavsim::vector::signed_angle_between;
use uavsim::PlanarVector;

const DT: f64 = 0.05;

fn params_strategy() -> impl Strategy<Value = InterceptorParams> {
    (20.0f64..40.0, 20.0f64..40.0, 0.0f64..=1.0, 0.0f64..0.2).prop_map(|(speed, lateral_accel, lead_fraction, deadzone)| {
        InterceptorParams { speed, lateral_accel, lead_fraction, deadzone }
    })
}

fn state_strategy() -> impl Strategy<Value = InterceptorState> {
    (-3000.0f64..3000.0, 0.0f64..3000.0, -3.14f64..3.14)
        .prop_map(|(x, altitude, heading)| InterceptorState { x, altitude, heading })
}

/// Chord of a constant-rate arc: `2 (v/r) sin(r dt / 2)`, or `v dt` when straight.
fn chord(speed: f64, rate: f64, dt: f64) -> f64 {
    if rate == 0.0 {
        speed * dt
    } else {
        2.0 * (speed / rate.abs()) * (rate.abs() * dt / 2.0).sin()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn speed_and_turn_bound(p in params_strategy(), s in state_strategy(), aim_x in -4000.0f64..4000.0, aim_y in 0.0f64..3000.0) {
        let aim = PlanarVector::new(aim_x, aim_y);
        let rate = interceptor::turn_rate(&s, aim, &p);
        let next = interceptor::step(&s, aim, &p, DT).unwrap();
        prop_assert!((next.velocity(&p).norm() - p.speed).abs() <= 1e-12 * p.speed);
        let moved = next.position().distance(s.position());
        let expect = chord(p.speed, rate, DT);
        prop_assert!((moved - expect).abs() <= 1e-12 * expect + 1e-12 * s.position().max_abs() * 1e-1);
        let turned = signed_angle_between(PlanarVector::from_angle(s.heading), PlanarVector::from_angle(next.heading)).abs();
        prop_assert!(turned <= p.max_turn_rate() * DT + 1e-12);
    }
}

#[test]
fn pure_pursuit_heading_error_never_grows() {
    let mut r = common::rng(77);
    use rand::Rng;
    for case in 0..200 {
        let p = InterceptorParams {
            speed: r.random_range(20.0..40.0),
            lateral_accel: r.random_range(20.0..40.0),
            lead_fraction: 0.0,
            deadzone: 0.0,
        };
        let radius = p.speed / p.max_turn_rate();
        let target = PlanarVector::new(0.0, 1500.0);
        let dist = r.random_range(2.5 * radius..2000.0);
        let bearing = r.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let start = target + PlanarVector::from_polar(dist, bearing);
        let mut s = InterceptorState { x: start.x, altitude: start.y, heading: r.random_range(-3.14..3.14) };
        let increment = p.max_turn_rate() * DT;
        let error = |s: &InterceptorState| {
            signed_angle_between(PlanarVector::from_angle(s.heading), target - s.position()).abs()
        };
        let mut prev = error(&s);
        for k in 0..2000 {
            if prev <= increment || s.position().distance(target) < p.speed * DT {
                break;
            }
            s = interceptor::step(&s, target, &p, DT).unwrap();
            let now = error(&s);
            assert!(now <= prev + 1e-12, "case {case} step {k}: {prev} -> {now}");
            prev = now;
        }
        assert!(prev <= increment, "case {case} never aligned");
    }
}
