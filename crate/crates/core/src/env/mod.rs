//! Episode orchestration for the three scenarios.
//!
//! 1. [`Scenario::FlyToPoint`]: reach a destination with a required velocity.
//! 2. [`Scenario::EvadeInterceptor`]: the same, while an ideal interceptor chases the UAV.
//! 3. [`Scenario::UavDuel`]: a second, agent-controlled UAV tries to catch the first.
//!
//! Every learning agent is paid the decrease of its time-to-go estimate each step, plus
//! terminal adjustments when the episode ends.

mod export;
mod observation;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bezier::{min_time, BoundaryConditions, T_CAP};
use crate::config::{EpisodeConfig, PursuitDirection};
use crate::dynamics::{self, ControlInput, UavState};
use crate::error::{invalid, Result, SimError};
use crate::interceptor::{self, InterceptorParams, InterceptorState};
use crate::reward::{self, TerminalEvent};
use crate::vector::PlanarVector;

pub use export::{TrajectoryRecorder, TrajectoryRow};
pub use observation::{Observation, Track, OBSERVATION_DIM, OBSERVATION_FIELDS};

/// Number of rotor commands per agent.
pub const ACTION_DIM: usize = 2;

/// Spawn attempts before giving up on a configuration.
pub const MAX_SPAWN_TRIES: u32 = 100;

const STREAM_EVADER: u64 = 0;
const STREAM_OPPONENT: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Scenario {
    FlyToPoint = 1,
    EvadeInterceptor = 2,
    UavDuel = 3,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Self::FlyToPoint, Self::EvadeInterceptor, Self::UavDuel];

    pub fn number(self) -> u8 {
        self as u8
    }

    /// Agents that must supply an action every step.
    pub fn agents(self) -> &'static [Agent] {
        match self {
            Self::UavDuel => &[Agent::Evader, Agent::Interceptor],
            _ => &[Agent::Evader],
        }
    }
}

impl TryFrom<u8> for Scenario {
    type Error = SimError;
    fn try_from(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Self::FlyToPoint),
            2 => Ok(Self::EvadeInterceptor),
            3 => Ok(Self::UavDuel),
            _ => Err(invalid(format!("unknown scenario {n}; expected 1, 2 or 3"))),
        }
    }
}

impl From<Scenario> for u8 {
    fn from(s: Scenario) -> u8 {
        s as u8
    }
}

impl FromStr for Scenario {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        let n: u8 = s.parse().map_err(|_| invalid(format!("unknown scenario {s:?}")))?;
        Self::try_from(n)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A learning agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agent {
    /// The UAV flying to its destination (present in every scenario).
    Evader,
    /// The agent-controlled pursuer of scenario 3.
    Interceptor,
}

impl Agent {
    pub fn name(self) -> &'static str {
        match self {
            Self::Evader => "evader",
            Self::Interceptor => "interceptor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpisodeStatus {
    Running,
    Success,
    OutOfBounds,
    Overspin,
    Intercepted,
    MaxSteps,
}

impl EpisodeStatus {
    pub fn is_done(self) -> bool {
        self != Self::Running
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Running => "running",
            Self::Success => "success",
            Self::OutOfBounds => "out_of_bounds",
            Self::Overspin => "overspin",
            Self::Intercepted => "intercepted",
            Self::MaxSteps => "max_steps",
        }
    }
}

impl fmt::Display for EpisodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value for the evader and, in scenario 3, for the interceptor agent.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerAgent<T> {
    pub evader: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interceptor: Option<T>,
}

impl<T: Copy> PerAgent<T> {
    pub fn get(&self, agent: Agent) -> Option<T> {
        match agent {
            Agent::Evader => Some(self.evader),
            Agent::Interceptor => self.interceptor,
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(T) -> U) -> PerAgent<U> {
        PerAgent { evader: f(self.evader), interceptor: self.interceptor.map(f) }
    }
}

/// Actions for one step. Both fields are required in scenario 3; only `evader` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Actions {
    pub evader: Option<ControlInput>,
    pub interceptor: Option<ControlInput>,
}

impl Actions {
    pub fn single(evader: ControlInput) -> Self {
        Self { evader: Some(evader), interceptor: None }
    }

    pub fn pair(evader: ControlInput, interceptor: ControlInput) -> Self {
        Self { evader: Some(evader), interceptor: Some(interceptor) }
    }
}

/// The aircraft opposing the evader, if any.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Opponent {
    None,
    /// Scripted constant-speed interceptor (scenario 2).
    Ideal { state: InterceptorState, params: InterceptorParams },
    /// Agent-controlled UAV (scenario 3).
    Uav { state: UavState },
}

impl Opponent {
    pub fn track(&self) -> Option<Track> {
        match self {
            Self::None => None,
            Self::Ideal { state, params } => {
                Some(Track { position: state.position(), velocity: state.velocity(params) })
            }
            Self::Uav { state } => Some(Track { position: state.position(), velocity: state.velocity() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeState {
    pub scenario: Scenario,
    pub seed: u64,
    pub evader: UavState,
    pub destination: PlanarVector,
    /// Required velocity at the destination.
    pub target_velocity: PlanarVector,
    pub opponent: Opponent,
    pub step_index: u32,
    /// Time-to-go estimates at reset.
    pub initial_tmin: PerAgent<f64>,
    /// Time-to-go estimates after the latest step.
    pub prev_tmin: PerAgent<f64>,
    pub status: EpisodeStatus,
}

/// Diagnostic data accompanying a step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepInfo {
    pub step: u32,
    pub time: f64,
    pub tmin: PerAgent<f64>,
    /// Shaped (time-to-go) part of the reward, without terminal adjustments.
    pub shaped_reward: PerAgent<f64>,
    pub distance_to_target: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<f64>,
    pub evader_state: UavState,
    pub opponent: Opponent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub observations: PerAgent<Observation>,
    pub rewards: PerAgent<f64>,
    pub done: bool,
    pub status: EpisodeStatus,
    pub info: StepInfo,
}

/// A running (or finished) episode together with its configuration.
#[derive(Debug, Clone)]
pub struct Episode {
    cfg: EpisodeConfig,
    state: EpisodeState,
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.random::<f64>()
}

fn uniform_angle(rng: &mut ChaCha8Rng) -> f64 {
    -std::f64::consts::PI + std::f64::consts::TAU * unit(rng)
}

/// Uniform point on a disc of `radius` around `center`.
fn disc_point(rng: &mut ChaCha8Rng, center: PlanarVector, radius: f64) -> PlanarVector {
    let r = radius * unit(rng).sqrt();
    center + PlanarVector::from_polar(r, uniform_angle(rng))
}

/// Initial UAV state at `pos` with randomized velocity, tilt and spin.
fn random_uav(rng: &mut ChaCha8Rng, cfg: &EpisodeConfig, pos: PlanarVector) -> UavState {
    let speed = cfg.init_speed.lerp(unit(rng));
    let heading = uniform_angle(rng);
    let vel = PlanarVector::from_polar(speed, heading);
    UavState {
        x: pos.x,
        altitude: pos.y,
        vx: vel.x,
        vy: vel.y,
        tilt: cfg.init_tilt.lerp(unit(rng)),
        omega: cfg.init_omega.lerp(unit(rng)),
        time: 0.0,
    }
}

fn in_region(cfg: &EpisodeConfig, p: PlanarVector, spawn: bool) -> bool {
    if spawn {
        cfg.spawn_x.contains(p.x) && cfg.spawn_h.contains(p.y)
    } else {
        cfg.world_x.contains(p.x) && cfg.world_h.contains(p.y)
    }
}

fn tmin_or_cap(bc: &BoundaryConditions, cfg: &EpisodeConfig) -> Result<f64> {
    let r = min_time(bc, &cfg.limits)?;
    Ok(if r.feasible { r.t_min } else { T_CAP })
}

/// Boundary conditions for a pursuer chasing `target` whose required arrival velocity is
/// `factor·|v_target|` along the line of sight.
pub fn pursuit_conditions(
    pursuer: &UavState,
    target: &UavState,
    factor: f64,
    direction: PursuitDirection,
) -> BoundaryConditions {
    let los = target.position() - pursuer.position();
    let dist = los.norm();
    let dir = if dist > 0.0 {
        match direction {
            PursuitDirection::Closing => los / dist,
            PursuitDirection::Opening => -los / dist,
        }
    } else {
        PlanarVector::ZERO
    };
    BoundaryConditions::new(
        pursuer.position(),
        pursuer.velocity(),
        target.position(),
        dir * (factor * target.speed()),
    )
}

impl Episode {
    /// Starts a new episode. The same `(scenario, seed, cfg)` always yields the same state.
    pub fn reset(
        scenario: Scenario,
        seed: u64,
        cfg: &EpisodeConfig,
    ) -> Result<(Self, PerAgent<Observation>)> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(STREAM_EVADER);

        let (evader, destination, target_velocity, tmin0) = Self::spawn_evader(&mut rng, cfg)?;

        let mut opp_rng = ChaCha8Rng::seed_from_u64(seed);
        opp_rng.set_stream(STREAM_OPPONENT);
        let opponent = match scenario {
            Scenario::FlyToPoint => Opponent::None,
            Scenario::EvadeInterceptor => Self::spawn_ideal(&mut opp_rng, cfg, &evader, tmin0)?,
            Scenario::UavDuel => Self::spawn_pursuer(&mut opp_rng, cfg, &evader, destination)?,
        };

        let mut state = EpisodeState {
            scenario,
            seed,
            evader,
            destination,
            target_velocity,
            opponent,
            step_index: 0,
            initial_tmin: PerAgent { evader: tmin0, interceptor: None },
            prev_tmin: PerAgent { evader: tmin0, interceptor: None },
            status: EpisodeStatus::Running,
        };
        if let Opponent::Uav { state: pursuer } = &opponent {
            let bc = pursuit_conditions(pursuer, &evader, cfg.pursuit_speed_factor, cfg.pursuit_direction);
            let t = tmin_or_cap(&bc, cfg)?;
            state.initial_tmin.interceptor = Some(t);
            state.prev_tmin.interceptor = Some(t);
        }

        let episode = Self { cfg: cfg.clone(), state };
        let obs = episode.observations();
        Ok((episode, obs))
    }

    /// Resumes an episode from an explicit state, such as a hand-built geometry.
    pub fn from_state(state: EpisodeState, cfg: &EpisodeConfig) -> Result<Self> {
        cfg.validate()?;
        let opponent_ok = matches!(
            (state.scenario, &state.opponent),
            (Scenario::FlyToPoint, Opponent::None)
                | (Scenario::EvadeInterceptor, Opponent::Ideal { .. })
                | (Scenario::UavDuel, Opponent::Uav { .. })
        );
        if !opponent_ok {
            return Err(invalid(format!("opponent does not match scenario {}", state.scenario)));
        }
        let two_agents = state.scenario == Scenario::UavDuel;
        if state.prev_tmin.interceptor.is_some() != two_agents {
            return Err(invalid("prev_tmin must carry an interceptor entry exactly in scenario 3"));
        }
        if !state.evader.is_finite() || !state.prev_tmin.evader.is_finite() {
            return Err(invalid("episode state must be finite"));
        }
        Ok(Self { cfg: cfg.clone(), state })
    }

    fn spawn_evader(
        rng: &mut ChaCha8Rng,
        cfg: &EpisodeConfig,
    ) -> Result<(UavState, PlanarVector, PlanarVector, f64)> {
        for _ in 0..MAX_SPAWN_TRIES {
            let start = PlanarVector::new(cfg.spawn_x.lerp(unit(rng)), cfg.spawn_h.lerp(unit(rng)));
            let uav = random_uav(rng, cfg, start);
            let destination = match cfg.target_distance {
                None => PlanarVector::new(cfg.spawn_x.lerp(unit(rng)), cfg.spawn_h.lerp(unit(rng))),
                Some(range) => {
                    let r = range.lerp(unit(rng));
                    let angle = if cfg.target_same_altitude {
                        if unit(rng) < 0.5 { 0.0 } else { std::f64::consts::PI }
                    } else {
                        uniform_angle(rng)
                    };
                    let offset = PlanarVector::from_polar(r, angle);
                    // keep the altitude bit-exact for same-altitude targets
                    if cfg.target_same_altitude {
                        PlanarVector::new(start.x + offset.x, start.y)
                    } else {
                        start + offset
                    }
                }
            };
            let target_velocity = PlanarVector::from_polar(cfg.target_speed.lerp(unit(rng)), uniform_angle(rng));
            if !in_region(cfg, destination, true) {
                continue;
            }
            let bc = BoundaryConditions::new(start, uav.velocity(), destination, target_velocity);
            let r = min_time(&bc, &cfg.limits)?;
            if r.feasible {
                return Ok((uav, destination, target_velocity, r.t_min));
            }
        }
        Err(SimError::Config(format!(
            "could not spawn a feasible evader/destination pair in {MAX_SPAWN_TRIES} tries"
        )))
    }

    fn spawn_ideal(
        rng: &mut ChaCha8Rng,
        cfg: &EpisodeConfig,
        evader: &UavState,
        tmin0: f64,
    ) -> Result<Opponent> {
        let params = InterceptorParams {
            speed: cfg.interceptor_speed.lerp(unit(rng)),
            lateral_accel: cfg.interceptor_accel.lerp(unit(rng)),
            lead_fraction: cfg.interceptor_lead.lerp(unit(rng)),
            deadzone: cfg.interceptor_deadzone.lerp(unit(rng)),
        };
        params.validate()?;
        let radius = cfg.spawn_radius_factor * tmin0 * params.speed;
        for _ in 0..MAX_SPAWN_TRIES {
            let pos = disc_point(rng, evader.position(), radius);
            let heading = uniform_angle(rng);
            if in_region(cfg, pos, false) {
                let state = InterceptorState { x: pos.x, altitude: pos.y, heading };
                return Ok(Opponent::Ideal { state, params });
            }
        }
        Err(SimError::Config(format!(
            "could not place the interceptor inside the world in {MAX_SPAWN_TRIES} tries"
        )))
    }

    fn spawn_pursuer(
        rng: &mut ChaCha8Rng,
        cfg: &EpisodeConfig,
        evader: &UavState,
        destination: PlanarVector,
    ) -> Result<Opponent> {
        for _ in 0..MAX_SPAWN_TRIES {
            let pos = disc_point(rng, destination, cfg.pursuer_spawn_radius);
            let pursuer = random_uav(rng, cfg, pos);
            if !in_region(cfg, pos, false) {
                continue;
            }
            let bc = pursuit_conditions(&pursuer, evader, cfg.pursuit_speed_factor, cfg.pursuit_direction);
            if min_time(&bc, &cfg.limits)?.feasible {
                return Ok(Opponent::Uav { state: pursuer });
            }
        }
        Err(SimError::Config(format!(
            "could not place the pursuing UAV in {MAX_SPAWN_TRIES} tries"
        )))
    }

    pub fn state(&self) -> &EpisodeState {
        &self.state
    }

    pub fn config(&self) -> &EpisodeConfig {
        &self.cfg
    }

    pub fn scenario(&self) -> Scenario {
        self.state.scenario
    }

    pub fn status(&self) -> EpisodeStatus {
        self.state.status
    }

    pub fn is_done(&self) -> bool {
        self.state.status.is_done()
    }

    /// Boundary conditions for the scenario-3 pursuer's time-to-go: from the pursuer to the
    /// evader's current position, arriving at `pursuit_speed_factor·|v_evader|` along the
    /// line of sight.
    pub fn pursuit_target(&self) -> Result<BoundaryConditions> {
        match &self.state.opponent {
            Opponent::Uav { state } if self.state.scenario == Scenario::UavDuel => Ok(pursuit_conditions(
                state,
                &self.state.evader,
                self.cfg.pursuit_speed_factor,
                self.cfg.pursuit_direction,
            )),
            _ => Err(SimError::ContractViolation(
                "pursuit_target is only defined in scenario 3".into(),
            )),
        }
    }

    /// Boundary conditions for the evader's time-to-go.
    pub fn evader_target(&self) -> BoundaryConditions {
        BoundaryConditions::new(
            self.state.evader.position(),
            self.state.evader.velocity(),
            self.state.destination,
            self.state.target_velocity,
        )
    }

    pub fn observe(&self, agent: Agent) -> Result<Observation> {
        let st = &self.state;
        match agent {
            Agent::Evader => {
                let target = Track { position: st.destination, velocity: st.target_velocity };
                Ok(Observation::build(&st.evader, target, st.opponent.track()))
            }
            Agent::Interceptor => {
                let Opponent::Uav { state: pursuer } = &st.opponent else {
                    return Err(invalid("no interceptor agent in this scenario"));
                };
                let bc = self.pursuit_target()?;
                let target = Track { position: bc.end_pos, velocity: bc.end_vel };
                let evader = Track { position: st.evader.position(), velocity: st.evader.velocity() };
                Ok(Observation::build(pursuer, target, Some(evader)))
            }
        }
    }

    pub fn observations(&self) -> PerAgent<Observation> {
        PerAgent {
            evader: self.observe(Agent::Evader).expect("evader always observable"),
            interceptor: self.observe(Agent::Interceptor).ok(),
        }
    }

    fn check_actions(&self, actions: &Actions) -> Result<(ControlInput, Option<ControlInput>)> {
        let evader = actions.evader.ok_or_else(|| invalid("missing action for agent \"evader\""))?;
        let duel = self.state.scenario == Scenario::UavDuel;
        match (duel, actions.interceptor) {
            (true, None) => Err(invalid("missing action for agent \"interceptor\"")),
            (false, Some(_)) => Err(invalid(format!(
                "scenario {} has no interceptor agent",
                self.state.scenario
            ))),
            (_, i) => Ok((evader, i)),
        }
    }

    fn out_of_world(&self, s: &UavState) -> bool {
        !in_region(&self.cfg, s.position(), false)
    }

    /// Advances every entity by one control period.
    pub fn step(&mut self, actions: &Actions) -> Result<StepOutcome> {
        if self.state.status.is_done() {
            return Err(SimError::ContractViolation(format!(
                "step called on a finished episode (status {})",
                self.state.status
            )));
        }
        let (evader_action, pursuer_action) = self.check_actions(actions)?;
        let cfg = &self.cfg;
        let dt = cfg.uav.control_period;
        let n = cfg.substeps;
        let h = dt / n as f64;

        // Evader, recording substep positions for the capture check.
        let mut evader_track = Vec::with_capacity(n as usize);
        let evader_next = dynamics::step_observed(
            &self.state.evader,
            &evader_action,
            &cfg.uav,
            &cfg.atmosphere,
            dt,
            n,
            |_, s| evader_track.push(s.position()),
        );

        // Opponent, aimed/controlled with information from the start of the interval.
        let mut opp_track = Vec::with_capacity(n as usize);
        let mut pursuer_failed = false;
        let opponent_next = match &self.state.opponent {
            Opponent::None => Opponent::None,
            Opponent::Ideal { state, params } => {
                let aim = interceptor::lead_point(
                    self.state.evader.position(),
                    self.state.evader.velocity(),
                    state.position(),
                    params,
                );
                let rate = interceptor::turn_rate(state, aim, params);
                for k in 1..=n {
                    opp_track.push(interceptor::advance(state, rate, params.speed, k as f64 * h).position());
                }
                Opponent::Ideal { state: interceptor::advance(state, rate, params.speed, dt), params: *params }
            }
            Opponent::Uav { state } => {
                let control = pursuer_action.expect("checked above");
                match dynamics::step_observed(state, &control, &cfg.uav, &cfg.atmosphere, dt, n, |_, s| {
                    opp_track.push(s.position())
                }) {
                    Ok(next) => Opponent::Uav { state: next },
                    Err(_) => {
                        pursuer_failed = true;
                        Opponent::Uav { state: *state }
                    }
                }
            }
        };

        let evader_failed = evader_next.is_err();
        let evader_next = evader_next.unwrap_or(self.state.evader);

        let stop = cfg.reward.stop_radius;
        let captured = !opp_track.is_empty()
            && evader_track.len() == opp_track.len()
            && evader_track.iter().zip(&opp_track).any(|(a, m)| a.distance(*m) < stop);

        let pursuer_state = match &opponent_next {
            Opponent::Uav { state } => Some(*state),
            _ => None,
        };
        let evader_out = evader_failed || self.out_of_world(&evader_next);
        let pursuer_out = pursuer_failed || pursuer_state.is_some_and(|s| self.out_of_world(&s));
        let evader_spin = evader_next.omega.abs() > cfg.omega_limit;
        let pursuer_spin = pursuer_state.is_some_and(|s| s.omega.abs() > cfg.omega_limit);
        let arrived = evader_next.position().distance(self.state.destination) < stop;
        let step_index = self.state.step_index + 1;

        let status = if evader_out || pursuer_out {
            EpisodeStatus::OutOfBounds
        } else if evader_spin || pursuer_spin {
            EpisodeStatus::Overspin
        } else if captured {
            EpisodeStatus::Intercepted
        } else if arrived {
            EpisodeStatus::Success
        } else if step_index >= cfg.max_steps {
            EpisodeStatus::MaxSteps
        } else {
            EpisodeStatus::Running
        };

        self.state.evader = evader_next;
        self.state.opponent = opponent_next;
        self.state.step_index = step_index;
        self.state.status = status;

        // Time-to-go and shaped rewards.
        let tmin_evader = tmin_or_cap(&self.evader_target(), cfg)?;
        let tmin_pursuer = match pursuer_state {
            Some(_) => Some(tmin_or_cap(&self.pursuit_target()?, cfg)?),
            None => None,
        };
        let shaped = PerAgent {
            evader: reward::step_reward(self.state.prev_tmin.evader, tmin_evader),
            interceptor: tmin_pursuer
                .zip(self.state.prev_tmin.interceptor)
                .map(|(now, prev)| reward::step_reward(prev, now)),
        };
        let tmin = PerAgent { evader: tmin_evader, interceptor: tmin_pursuer };
        self.state.prev_tmin = tmin;

        let rc = &cfg.reward;
        let mut rewards = shaped;
        match status {
            EpisodeStatus::OutOfBounds => {
                if evader_out {
                    rewards.evader += reward::terminal_adjustment(TerminalEvent::OutOfBounds, rc);
                }
                if pursuer_out {
                    if let Some(r) = rewards.interceptor.as_mut() {
                        *r += reward::terminal_adjustment(TerminalEvent::OutOfBounds, rc);
                    }
                }
            }
            EpisodeStatus::Overspin => {
                if evader_spin {
                    rewards.evader += reward::terminal_adjustment(TerminalEvent::Overspin, rc);
                }
                if pursuer_spin {
                    if let Some(r) = rewards.interceptor.as_mut() {
                        *r += reward::terminal_adjustment(TerminalEvent::Overspin, rc);
                    }
                }
            }
            EpisodeStatus::Intercepted => {
                rewards.evader += reward::terminal_adjustment(TerminalEvent::Intercepted, rc);
                if let Some(r) = rewards.interceptor.as_mut() {
                    *r += reward::terminal_adjustment(TerminalEvent::InterceptSuccess, rc);
                }
            }
            EpisodeStatus::Success => {
                rewards.evader = reward::terminal_success(
                    shaped.evader,
                    evader_next.velocity(),
                    self.state.target_velocity,
                    tmin_evader,
                    rc,
                );
            }
            EpisodeStatus::MaxSteps | EpisodeStatus::Running => {}
        }

        let separation = self
            .state
            .opponent
            .track()
            .map(|m| m.position.distance(evader_next.position()));
        let info = StepInfo {
            step: step_index,
            time: evader_next.time,
            tmin,
            shaped_reward: shaped,
            distance_to_target: evader_next.position().distance(self.state.destination),
            separation,
            evader_state: evader_next,
            opponent: self.state.opponent,
        };
        Ok(StepOutcome {
            observations: self.observations(),
            rewards,
            done: status.is_done(),
            status,
            info,
        })
    }
}
