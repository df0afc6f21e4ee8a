//! Scripted (non-learning) controllers.
//!
//! Both controllers share one inner loop: a collective command that tracks a vertical
//! acceleration, and a differential command that drives tilt toward a setpoint while
//! damping spin. Since `dω/dt ∝ (a2 − a1)`, a positive tilt correction raises `a2`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::atmosphere::AtmosphereModel;
use crate::dynamics::{ControlInput, UavParams, UavState};
use crate::env::{Actions, Episode, Opponent, Scenario};
use crate::error::{invalid, Result, SimError};
use crate::vector::PlanarVector;

/// Largest tilt the position loop will command.
pub const MAX_TILT_COMMAND: f64 = std::f64::consts::PI / 6.0;

const POLICY_STREAM: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdGains {
    pub kp_tilt: f64,
    pub kd_tilt: f64,
    pub kp_pos: f64,
    pub kd_pos: f64,
    pub kp_alt: f64,
    pub kd_alt: f64,
}

impl Default for PdGains {
    fn default() -> Self {
        Self {
            kp_tilt: 30.0,
            kd_tilt: 10.0,
            kp_pos: 0.08,
            kd_pos: 0.6,
            kp_alt: 0.5,
            kd_alt: 1.0,
        }
    }
}

/// Vehicle data the controllers need to convert accelerations into rotor commands.
#[derive(Debug, Clone, Copy)]
pub struct Plant<'a> {
    pub params: &'a UavParams,
    pub atmos: &'a AtmosphereModel,
}

fn mix(
    state: &UavState,
    tilt_cmd: f64,
    vertical_accel: f64,
    gains: &PdGains,
    plant: Plant<'_>,
) -> ControlInput {
    let g = plant.atmos.g0;
    let f_max = plant.params.max_thrust(plant.atmos, state.altitude);
    let az = vertical_accel.clamp(-0.8 * g, g);
    let cos_b = state.tilt.cos().max(0.5);
    let collective = plant.params.mass * (g + az) / (2.0 * f_max * cos_b);

    let spin_accel = gains.kp_tilt * (tilt_cmd - state.tilt) - gains.kd_tilt * state.omega;
    let diff = (spin_accel * plant.params.inertia / (plant.params.arm * f_max)).clamp(-1.0, 1.0);
    let half = diff.abs() / 2.0;
    let collective = collective.clamp(half, 1.0 - half);
    ControlInput::new(collective - diff / 2.0, collective + diff / 2.0)
}

/// Holds `target_altitude` with a level axis.
pub fn hover_policy(state: &UavState, target_altitude: f64, gains: &PdGains, plant: Plant<'_>) -> ControlInput {
    let az = gains.kp_alt * (target_altitude - state.altitude) - gains.kd_alt * state.vy;
    mix(state, 0.0, az, gains, plant)
}

/// Tilt command (rad) the position loop asks for; thrust leans toward `+x` for negative tilt.
pub fn goto_tilt_command(state: &UavState, destination: PlanarVector, gains: &PdGains, g: f64) -> f64 {
    let ax = gains.kp_pos * (destination.x - state.x) - gains.kd_pos * state.vx;
    (-ax.atan2(g)).clamp(-MAX_TILT_COMMAND, MAX_TILT_COMMAND)
}

/// Flies to `destination` and stops there.
pub fn goto_policy(state: &UavState, destination: PlanarVector, gains: &PdGains, plant: Plant<'_>) -> ControlInput {
    let tilt_cmd = goto_tilt_command(state, destination, gains, plant.atmos.g0);
    let az = gains.kp_alt * (destination.y - state.altitude) - gains.kd_alt * state.vy;
    mix(state, tilt_cmd, az, gains, plant)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Hover,
    Goto,
    Random,
}

impl FromStr for PolicyKind {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hover" => Ok(Self::Hover),
            "goto" => Ok(Self::Goto),
            "random" => Ok(Self::Random),
            other => Err(invalid(format!("unknown policy {other:?}; expected hover, goto or random"))),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hover => "hover",
            Self::Goto => "goto",
            Self::Random => "random",
        })
    }
}

/// Drives every agent of an episode with one scripted policy.
///
/// `hover` holds each UAV's altitude at construction time; `goto` flies the evader to its
/// destination and the scenario-3 pursuer to the evader; `random` draws uniform commands
/// from a generator seeded by the episode seed.
#[derive(Debug, Clone)]
pub struct Pilot {
    kind: PolicyKind,
    gains: PdGains,
    rng: ChaCha8Rng,
    hold_altitude: (f64, Option<f64>),
}

impl Pilot {
    pub fn new(kind: PolicyKind, episode: &Episode) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(episode.state().seed);
        rng.set_stream(POLICY_STREAM);
        let pursuer_alt = match &episode.state().opponent {
            Opponent::Uav { state } => Some(state.altitude),
            _ => None,
        };
        Self {
            kind,
            gains: PdGains::default(),
            rng,
            hold_altitude: (episode.state().evader.altitude, pursuer_alt),
        }
    }

    pub fn with_gains(mut self, gains: PdGains) -> Self {
        self.gains = gains;
        self
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    fn random_control(&mut self) -> ControlInput {
        ControlInput::new(self.rng.random(), self.rng.random())
    }

    pub fn actions(&mut self, episode: &Episode) -> Actions {
        let cfg = episode.config();
        let plant = Plant { params: &cfg.uav, atmos: &cfg.atmosphere };
        let st = episode.state();
        let pursuer = match &st.opponent {
            Opponent::Uav { state } if st.scenario == Scenario::UavDuel => Some(*state),
            _ => None,
        };
        let evader = match self.kind {
            PolicyKind::Hover => hover_policy(&st.evader, self.hold_altitude.0, &self.gains, plant),
            PolicyKind::Goto => goto_policy(&st.evader, st.destination, &self.gains, plant),
            PolicyKind::Random => self.random_control(),
        };
        let interceptor = pursuer.map(|p| match self.kind {
            PolicyKind::Hover => {
                hover_policy(&p, self.hold_altitude.1.unwrap_or(p.altitude), &self.gains, plant)
            }
            PolicyKind::Goto => goto_policy(&p, st.evader.position(), &self.gains, plant),
            PolicyKind::Random => self.random_control(),
        });
        Actions { evader: Some(evader), interceptor }
    }
}
