//! Ideal point-mass interceptor: constant speed, bang-bang turning toward a lead point,
//! straight flight while the aim point sits inside the angular deadzone.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::vector::{wrap_angle, PlanarVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterceptorParams {
    /// Constant speed, m/s.
    pub speed: f64,
    /// Lateral acceleration available for turning, m/s².
    pub lateral_accel: f64,
    /// Lead coefficient in `[0, 1]`: 0 is pure pursuit, 1 full lead.
    pub lead_fraction: f64,
    /// Full angular width of the no-turn cone, rad.
    pub deadzone: f64,
}

impl InterceptorParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.speed > 0.0 && self.speed.is_finite()) {
            return Err(invalid(format!("interceptor speed must be positive, got {}", self.speed)));
        }
        if !(self.lateral_accel >= 0.0 && self.lateral_accel.is_finite()) {
            return Err(invalid("interceptor lateral_accel must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.lead_fraction) {
            return Err(invalid("interceptor lead_fraction must lie in [0, 1]"));
        }
        if !(self.deadzone >= 0.0 && self.deadzone.is_finite()) {
            return Err(invalid("interceptor deadzone must be non-negative"));
        }
        Ok(())
    }

    /// Maximum turn rate `a_M / |v_M|`, rad/s.
    pub fn max_turn_rate(&self) -> f64 {
        self.lateral_accel / self.speed
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct InterceptorState {
    pub x: f64,
    pub altitude: f64,
    /// Flight-path angle from +x, rad, in (−π, π].
    pub heading: f64,
}

impl InterceptorState {
    pub fn position(&self) -> PlanarVector {
        PlanarVector::new(self.x, self.altitude)
    }

    pub fn velocity(&self, params: &InterceptorParams) -> PlanarVector {
        PlanarVector::from_polar(params.speed, self.heading)
    }
}

/// Anticipated target position `A + μ·v` with `μ = λ·|A − M| / |v_M|`.
pub fn lead_point(
    uav_pos: PlanarVector,
    uav_vel: PlanarVector,
    my_pos: PlanarVector,
    params: &InterceptorParams,
) -> PlanarVector {
    let mu = params.lead_fraction * uav_pos.distance(my_pos) / params.speed;
    uav_pos + uav_vel * mu
}

/// Commanded heading rate toward `aim`.
///
/// Zero while the unsigned angle between the velocity and the line of sight is within half
/// the deadzone (the boundary counts as inside); otherwise full rate, turning the short way.
/// A target exactly astern turns counter-clockwise.
pub fn turn_rate(state: &InterceptorState, aim: PlanarVector, params: &InterceptorParams) -> f64 {
    let los = aim - state.position();
    if los == PlanarVector::ZERO {
        return 0.0;
    }
    let heading = PlanarVector::from_angle(state.heading);
    let cross = heading.cross(los);
    let error = cross.abs().atan2(heading.dot(los));
    if error <= params.deadzone / 2.0 {
        0.0
    } else if cross < 0.0 {
        -params.max_turn_rate()
    } else {
        params.max_turn_rate()
    }
}

/// Exact constant-rate arc of duration `dt` at `speed`.
pub fn advance(state: &InterceptorState, rate: f64, speed: f64, dt: f64) -> InterceptorState {
    let h0 = state.heading;
    let h1 = h0 + rate * dt;
    let (dx, dy) = if rate == 0.0 {
        let (s, c) = h0.sin_cos();
        (speed * dt * c, speed * dt * s)
    } else {
        let r = speed / rate;
        (r * (h1.sin() - h0.sin()), -r * (h1.cos() - h0.cos()))
    };
    InterceptorState { x: state.x + dx, altitude: state.altitude + dy, heading: wrap_angle(h1) }
}

/// Turns toward `aim` (rate held over `dt`) and flies the resulting arc.
pub fn step(
    state: &InterceptorState,
    aim: PlanarVector,
    params: &InterceptorParams,
    dt: f64,
) -> Result<InterceptorState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("dt must be positive, got {dt}")));
    }
    let rate = turn_rate(state, aim, params);
    Ok(advance(state, rate, params.speed, dt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn params(speed: f64, accel: f64, lead: f64, deadzone: f64) -> InterceptorParams {
        InterceptorParams { speed, lateral_accel: accel, lead_fraction: lead, deadzone }
    }

    #[test]
    fn lead_point_examples() {
        let a = PlanarVector::new(0.0, 0.0);
        let m = PlanarVector::new(200.0, 0.0);
        let vel = PlanarVector::new(10.0, 0.0);
        assert_eq!(lead_point(a, vel, m, &params(40.0, 1.0, 0.0, 0.0)), a);
        assert_eq!(lead_point(a, vel, m, &params(40.0, 1.0, 1.0, 0.0)), PlanarVector::new(50.0, 0.0));
        assert_eq!(lead_point(a, PlanarVector::ZERO, m, &params(40.0, 1.0, 0.7, 0.0)), a);
    }

    #[test]
    fn turn_rate_examples() {
        let p = params(30.0, 30.0, 0.0, 0.1);
        let s = InterceptorState::default();
        assert_eq!(turn_rate(&s, PlanarVector::new(100.0, 0.0), &p), 0.0);
        assert_eq!(turn_rate(&s, PlanarVector::new(0.0, 100.0), &p), 1.0);
        assert_eq!(turn_rate(&s, PlanarVector::new(0.0, -100.0), &p), -1.0);
        assert_eq!(turn_rate(&s, s.position(), &p), 0.0);
    }

    #[test]
    fn deadzone_boundary_holds_heading() {
        let half = 0.2;
        let p = params(30.0, 30.0, 0.0, 2.0 * half);
        let s = InterceptorState::default();
        let inside = PlanarVector::from_polar(100.0, half * 0.999);
        assert_eq!(turn_rate(&s, inside, &p), 0.0);
        let outside = PlanarVector::from_polar(100.0, half * 1.01);
        assert_eq!(turn_rate(&s, outside, &p), 1.0);
    }

    #[test]
    fn straight_and_arc_steps() {
        let p = params(30.0, 30.0, 0.0, 0.0);
        let s = advance(&InterceptorState::default(), 0.0, p.speed, 0.05);
        assert_relative_eq!(s.x, 1.5);
        assert_eq!(s.altitude, 0.0);

        let s = advance(&InterceptorState::default(), 1.0, p.speed, PI);
        assert!(s.x.abs() < 1e-12);
        assert_relative_eq!(s.altitude, 60.0, max_relative = 1e-12);
        assert_relative_eq!(s.heading, PI);
    }

    #[test]
    fn step_rejects_bad_dt() {
        let p = params(30.0, 30.0, 0.0, 0.0);
        assert!(step(&InterceptorState::default(), PlanarVector::new(1.0, 0.0), &p, 0.0).is_err());
    }

    #[test]
    fn validate_ranges() {
        assert!(params(0.0, 1.0, 0.5, 0.1).validate().is_err());
        assert!(params(1.0, -1.0, 0.5, 0.1).validate().is_err());
        assert!(params(1.0, 1.0, 1.5, 0.1).validate().is_err());
        assert!(params(1.0, 1.0, 0.5, 0.1).validate().is_ok());
    }
}
