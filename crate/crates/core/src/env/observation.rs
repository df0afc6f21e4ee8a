use serde::{Deserialize, Serialize};

use crate::dynamics::{angle_of_attack, UavState};
use crate::vector::{signed_angle_between, PlanarVector};

/// Number of components in an [`Observation`].
pub const OBSERVATION_DIM: usize = 13;

/// Component names in order.
pub const OBSERVATION_FIELDS: [&str; OBSERVATION_DIM] = [
    "altitude",
    "omega",
    "angle_of_attack",
    "tilt",
    "speed",
    "target_distance",
    "target_speed",
    "target_bearing",
    "target_velocity_angle",
    "opponent_distance",
    "opponent_speed",
    "opponent_bearing",
    "opponent_velocity_angle",
];

/// Agent-facing state vector:
/// `(H, ω, α, β, |v|, L_D, |v_D|, φ_D, γ_D, L_M, |v_M|, φ_M, γ_M)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Observation(pub [f64; OBSERVATION_DIM]);

/// Position and velocity of something the agent is aiming at or watching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Track {
    pub position: PlanarVector,
    pub velocity: PlanarVector,
}

impl Observation {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The four opponent components.
    pub fn opponent_block(&self) -> [f64; 4] {
        [self.0[9], self.0[10], self.0[11], self.0[12]]
    }

    /// Builds the observation of `own` toward `target`, optionally watching `opponent`.
    pub fn build(own: &UavState, target: Track, opponent: Option<Track>) -> Self {
        let pos = own.position();
        let axis = own.axis();
        let to_target = target.position - pos;
        let mut o = [0.0; OBSERVATION_DIM];
        o[0] = own.altitude;
        o[1] = own.omega;
        o[2] = angle_of_attack(own);
        o[3] = own.tilt;
        o[4] = own.speed();
        o[5] = to_target.norm();
        o[6] = target.velocity.norm();
        o[7] = signed_angle_between(axis, to_target);
        o[8] = signed_angle_between(to_target, target.velocity);
        if let Some(m) = opponent {
            let to_opp = m.position - pos;
            o[9] = to_opp.norm();
            o[10] = m.velocity.norm();
            o[11] = signed_angle_between(axis, to_opp);
            o[12] = signed_angle_between(to_opp, m.velocity);
        }
        Self(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn still_target(x: f64, y: f64) -> Track {
        Track { position: PlanarVector::new(x, y), velocity: PlanarVector::ZERO }
    }

    #[test]
    fn target_dead_ahead() {
        let o = Observation::build(&UavState::default(), still_target(100.0, 0.0), None);
        assert_eq!(o.0[5], 100.0);
        assert_eq!(o.0[7], 0.0);
        assert_eq!(o.opponent_block(), [0.0; 4]);
    }

    #[test]
    fn target_overhead_is_quarter_turn_left() {
        let o = Observation::build(&UavState::default(), still_target(0.0, 100.0), None);
        assert_relative_eq!(o.0[7], PI / 2.0);
    }

    #[test]
    fn opponent_block_geometry() {
        let own = UavState { tilt: 0.3, vx: 1.0, ..Default::default() };
        let opp = Track { position: PlanarVector::new(-50.0, 0.0), velocity: PlanarVector::new(0.0, 20.0) };
        let o = Observation::build(&own, still_target(10.0, 0.0), Some(opp));
        assert_eq!(o.0[9], 50.0);
        assert_eq!(o.0[10], 20.0);
        assert_relative_eq!(o.0[11], PI - 0.3, epsilon = 1e-12);
        // line of sight points to -x, velocity +y: a clockwise quarter turn
        assert_relative_eq!(o.0[12], -PI / 2.0, epsilon = 1e-12);
        assert_relative_eq!(o.0[2], -0.3, epsilon = 1e-12);
    }
}
