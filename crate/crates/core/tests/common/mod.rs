//! Shared generators and independent reference computations for the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uavsim::bezier::BoundaryConditions;
use uavsim::dynamics::{self, ControlInput, UavParams, UavState};
use uavsim::atmosphere::AtmosphereModel;
use uavsim::policy::{Pilot, PolicyKind};
use uavsim::{Actions, Episode, EpisodeConfig, EpisodeStatus, PlanarVector, Scenario, StepOutcome};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point(r: &mut ChaCha8Rng, span: f64) -> PlanarVector {
    PlanarVector::new(r.random_range(-span..span), r.random_range(-span..span))
}

/// Velocity with modulus below `max_speed` and uniform direction.
pub fn velocity(r: &mut ChaCha8Rng, max_speed: f64) -> PlanarVector {
    let speed = r.random_range(0.0..max_speed);
    let ang = r.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    PlanarVector::new(speed * ang.cos(), speed * ang.sin())
}

pub fn boundary_conditions(r: &mut ChaCha8Rng) -> BoundaryConditions {
    BoundaryConditions::new(point(r, 3000.0), velocity(r, 30.0), point(r, 3000.0), velocity(r, 30.0))
}

pub fn duration(r: &mut ChaCha8Rng) -> f64 {
    r.random_range(0.5..300.0)
}

/// Direct Bernstein-form evaluation written independently of the library.
pub fn bernstein_position(c: &[PlanarVector; 4], tau: f64) -> PlanarVector {
    let s = 1.0 - tau;
    let w = [s.powi(3), 3.0 * tau * s * s, 3.0 * tau * tau * s, tau.powi(3)];
    let mut out = PlanarVector::ZERO;
    for (p, w) in c.iter().zip(w) {
        out = out + *p * w;
    }
    out
}

/// Rest-to-rest minimum time for a straight move of length `d`: the cubic's peak speed is
/// `1.5 d/T` at mid-course and its peak acceleration `6 d/T²` at the ends.
pub fn rest_to_rest_time(d: f64, v_max: f64, a_max: f64) -> f64 {
    (1.5 * d / v_max).max((6.0 * d / a_max).sqrt())
}

/// Closed-form vertical fall from rest at constant gravity with quadratic drag
/// `k v²` (per unit mass): `v(t) = −v_t tanh(g t / v_t)`, `v_t = √(g/k)`.
pub fn drag_fall_speed(g: f64, k: f64, t: f64) -> f64 {
    let vt = (g / k).sqrt();
    -vt * (g * t / vt).tanh()
}

/// Drag-free constant-g fall from rest: `(v, Δh)`.
pub fn vacuum_fall(g: f64, t: f64) -> (f64, f64) {
    (-g * t, -0.5 * g * t * t)
}

/// Fixed 1 s maneuver used by the integration-order checks.
pub fn maneuver_start() -> (UavState, ControlInput) {
    let s = UavState { x: 10.0, altitude: 500.0, vx: 12.0, vy: -3.0, tilt: 0.2, omega: -0.4, time: 0.0 };
    (s, ControlInput::new(0.55, 0.7))
}

/// Integrates the maneuver for 1 s with `substeps` RK4 substeps of one 1 s period.
pub fn fly_maneuver(substeps: u32) -> UavState {
    let (s, u) = maneuver_start();
    dynamics::step(&s, &u, &UavParams::default(), &AtmosphereModel::default(), 1.0, substeps).unwrap()
}

pub fn state_error(a: &UavState, b: &UavState) -> f64 {
    [a.x - b.x, a.altitude - b.altitude, a.vx - b.vx, a.vy - b.vy, a.tilt - b.tilt, a.omega - b.omega]
        .iter()
        .map(|d| d.abs())
        .fold(0.0, f64::max)
}

/// Least-squares slope of `log(err)` against `log(h)`.
pub fn convergence_exponent(substeps: &[u32], reference: &UavState) -> f64 {
    let pts: Vec<(f64, f64)> = substeps
        .iter()
        .map(|&n| ((1.0 / n as f64).ln(), state_error(&fly_maneuver(n), reference).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Everything recorded from one scripted episode.
pub struct Run {
    pub outcomes: Vec<StepOutcome>,
    pub actions: Vec<Actions>,
    pub initial_tmin: (f64, Option<f64>),
}

impl Run {
    pub fn status(&self) -> EpisodeStatus {
        self.outcomes.last().map(|o| o.status).unwrap_or(EpisodeStatus::Running)
    }
}

pub fn run_policy(scenario: Scenario, seed: u64, policy: PolicyKind, cfg: &EpisodeConfig) -> Run {
    let (mut ep, _) = Episode::reset(scenario, seed, cfg).unwrap();
    let t0 = ep.state().initial_tmin;
    let mut pilot = Pilot::new(policy, &ep);
    let mut outcomes = Vec::new();
    let mut actions = Vec::new();
    while !ep.is_done() {
        let a = pilot.actions(&ep);
        outcomes.push(ep.step(&a).unwrap());
        actions.push(a);
    }
    Run { outcomes, actions, initial_tmin: (t0.evader, t0.interceptor) }
}

/// Largest telescoping residual over the agents of a run.
pub fn telescoping_residual(run: &Run) -> f64 {
    let last = &run.outcomes.last().unwrap().info;
    let shaped_e: f64 = run.outcomes.iter().map(|o| o.info.shaped_reward.evader).sum();
    let mut worst = (shaped_e - (run.initial_tmin.0 - last.tmin.evader)).abs();
    if let (Some(t0), Some(tn)) = (run.initial_tmin.1, last.tmin.interceptor) {
        let shaped_i: f64 = run.outcomes.iter().map(|o| o.info.shaped_reward.interceptor.unwrap()).sum();
        worst = worst.max((shaped_i - (t0 - tn)).abs());
    }
    worst
}

/// Pearson statistic for counts against a uniform expectation.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}

/// Upper 0.001 quantile of the chi-square distribution with 15 degrees of freedom.
pub const CHI2_15_P001: f64 = 37.6973;

/// Minimal line-protocol client.
pub struct Client {
    reader: std::io::BufReader<std::net::TcpStream>,
    writer: std::net::TcpStream,
}

impl Client {
    pub fn connect(addr: std::net::SocketAddr) -> Self {
        let stream = std::net::TcpStream::connect(addr).unwrap();
        stream.set_nodelay(true).unwrap();
        let writer = stream.try_clone().unwrap();
        Self { reader: std::io::BufReader::new(stream), writer }
    }

    pub fn send_raw(&mut self, line: &str) -> serde_json::Value {
        use std::io::{BufRead, Write};
        self.writer.write_all(format!("{line}\n").as_bytes()).unwrap();
        let mut reply = String::new();
        self.reader.read_line(&mut reply).unwrap();
        serde_json::from_str(&reply).unwrap()
    }

    pub fn send(&mut self, request: &serde_json::Value) -> serde_json::Value {
        self.send_raw(&request.to_string())
    }

    pub fn reset(&mut self, scenario: Scenario, seed: u64) -> serde_json::Value {
        self.send(&serde_json::json!({"cmd": "reset", "scenario": scenario.number(), "seed": seed}))
    }

    pub fn step(&mut self, actions: &Actions) -> StepOutcome {
        let mut map = serde_json::Map::new();
        if let Some(u) = actions.evader {
            map.insert("evader".into(), serde_json::json!([u.a1, u.a2]));
        }
        if let Some(u) = actions.interceptor {
            map.insert("interceptor".into(), serde_json::json!([u.a1, u.a2]));
        }
        let reply = self.send(&serde_json::json!({"cmd": "step", "actions": map}));
        assert_eq!(reply["ok"], true, "{reply}");
        serde_json::from_value(reply).unwrap()
    }
}

/// Starts a server on an ephemeral local port.
pub fn start_server(cfg: EpisodeConfig) -> std::net::SocketAddr {
    let (addr, _) = uavsim::server::Server::bind("127.0.0.1:0", cfg).unwrap().spawn().unwrap();
    addr
}

/// Replays `actions` through a server connection, returning every outcome.
pub fn replay_remote(addr: std::net::SocketAddr, scenario: Scenario, seed: u64, actions: &[Actions]) -> Vec<StepOutcome> {
    let mut c = Client::connect(addr);
    assert_eq!(c.reset(scenario, seed)["ok"], true);
    let out = actions.iter().map(|a| c.step(a)).collect();
    c.send_raw(r#"{"cmd":"close"}"#);
    out
}

pub fn export(scenario: Scenario, outcomes: &[StepOutcome], actions: &[Actions]) -> String {
    let mut rec = uavsim::env::TrajectoryRecorder::new(scenario);
    for (o, a) in outcomes.iter().zip(actions) {
        rec.record(o, a);
    }
    rec.to_csv_string()
}
