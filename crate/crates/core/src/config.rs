//! Episode configuration and its flat `key = value` file format.
//!
//! Every key is optional; missing keys keep their defaults and unknown keys are rejected.
//! Intervals are written as two-element arrays, e.g. `spawn_x = [-4000, 4000]`.
//!
//! ```text
//! # uavsim configuration
//! max_steps = 2400
//! interceptor_speed = [20, 40]
//! final_reward_denominator = "difference"
//! ```

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use toml::Value;

use crate::atmosphere::AtmosphereModel;
use crate::bezier::KinematicLimits;
use crate::dynamics::UavParams;
use crate::error::{Result, SimError};
use crate::reward::{FinalRewardDenominator, RewardConfig};

/// Environment variable the CLI consults for a configuration path.
pub const CONFIG_ENV_VAR: &str = "UAVSIM_CONFIG";

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    pub fn is_valid(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi
    }

    /// Maps a unit sample `u ∈ [0, 1)` onto the interval.
    pub fn lerp(&self, u: f64) -> f64 {
        self.lo + (self.hi - self.lo) * u
    }

    pub fn within(&self, outer: &Interval) -> bool {
        self.lo >= outer.lo && self.hi <= outer.hi
    }
}

/// Sign convention for the required velocity at a moving pursuit target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PursuitDirection {
    /// Along the line of sight from the pursuer toward the target.
    Closing,
    /// Along the line of sight from the target toward the pursuer.
    Opening,
}

impl FromStr for PursuitDirection {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closing" => Ok(Self::Closing),
            "opening" => Ok(Self::Opening),
            other => Err(SimError::Config(format!("unknown pursuit_direction {other:?}"))),
        }
    }
}

impl fmt::Display for PursuitDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Closing => "closing",
            Self::Opening => "opening",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeConfig {
    pub world_x: Interval,
    pub world_h: Interval,
    pub spawn_x: Interval,
    pub spawn_h: Interval,
    pub init_speed: Interval,
    pub init_tilt: Interval,
    pub init_omega: Interval,
    pub target_speed: Interval,
    /// When set, the destination is drawn at this distance from the start instead of
    /// uniformly over the spawn region.
    pub target_distance: Option<Interval>,
    /// With `target_distance`, keep the destination at the start altitude.
    pub target_same_altitude: bool,
    pub omega_limit: f64,
    pub max_steps: u32,
    /// RK4 substeps per control period.
    pub substeps: u32,
    pub interceptor_speed: Interval,
    pub interceptor_accel: Interval,
    pub interceptor_lead: Interval,
    pub interceptor_deadzone: Interval,
    pub spawn_radius_factor: f64,
    /// Radius of the spawn disc for the second UAV around the destination, m.
    pub pursuer_spawn_radius: f64,
    pub pursuit_speed_factor: f64,
    pub pursuit_direction: PursuitDirection,
    pub uav: UavParams,
    pub limits: KinematicLimits,
    pub reward: RewardConfig,
    pub atmosphere: AtmosphereModel,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        let ten_deg = 10f64.to_radians();
        Self {
            world_x: Interval::new(-5000.0, 5000.0),
            world_h: Interval::new(0.0, 3000.0),
            spawn_x: Interval::new(-4000.0, 4000.0),
            spawn_h: Interval::new(0.0, 2500.0),
            init_speed: Interval::new(0.0, 2.0),
            init_tilt: Interval::new(-ten_deg, ten_deg),
            init_omega: Interval::new(-0.01, 0.01),
            target_speed: Interval::new(1.0, 13.0),
            target_distance: None,
            target_same_altitude: false,
            omega_limit: 20.0,
            max_steps: 2400,
            substeps: 5,
            interceptor_speed: Interval::new(20.0, 40.0),
            interceptor_accel: Interval::new(20.0, 40.0),
            interceptor_lead: Interval::new(0.0, 1.0),
            interceptor_deadzone: Interval::new(2f64.to_radians(), ten_deg),
            spawn_radius_factor: 0.9,
            pursuer_spawn_radius: 500.0,
            pursuit_speed_factor: 1.2,
            pursuit_direction: PursuitDirection::Closing,
            uav: UavParams::default(),
            limits: KinematicLimits::default(),
            reward: RewardConfig::default(),
            atmosphere: AtmosphereModel::default(),
        }
    }
}

fn cfg_err(msg: impl Into<String>) -> SimError {
    SimError::Config(msg.into())
}

fn as_f64(key: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(cfg_err(format!("{key}: expected a number"))),
    }
}

fn as_u32(key: &str, v: &Value) -> Result<u32> {
    match v {
        Value::Integer(i) => u32::try_from(*i).map_err(|_| cfg_err(format!("{key}: out of range"))),
        _ => Err(cfg_err(format!("{key}: expected an integer"))),
    }
}

fn as_interval(key: &str, v: &Value) -> Result<Interval> {
    match v {
        Value::Array(items) if items.len() == 2 => {
            Ok(Interval::new(as_f64(key, &items[0])?, as_f64(key, &items[1])?))
        }
        _ => Err(cfg_err(format!("{key}: expected a two-element array [lo, hi]"))),
    }
}

fn as_str<'a>(key: &str, v: &'a Value) -> Result<&'a str> {
    v.as_str().ok_or_else(|| cfg_err(format!("{key}: expected a string")))
}

fn as_bool(key: &str, v: &Value) -> Result<bool> {
    v.as_bool().ok_or_else(|| cfg_err(format!("{key}: expected true or false")))
}

impl EpisodeConfig {
    /// Parses a configuration file body, starting from the defaults.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| cfg_err(e.to_string()))?;
        let mut cfg = Self::default();
        for (key, value) in &table {
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| cfg_err(format!("reading {}: {e}", path.display())))?;
        Self::from_config_str(&text)
    }

    fn set(&mut self, key: &str, v: &Value) -> Result<()> {
        match key {
            "world_x" => self.world_x = as_interval(key, v)?,
            "world_h" => self.world_h = as_interval(key, v)?,
            "spawn_x" => self.spawn_x = as_interval(key, v)?,
            "spawn_h" => self.spawn_h = as_interval(key, v)?,
            "init_speed" => self.init_speed = as_interval(key, v)?,
            "init_tilt" => self.init_tilt = as_interval(key, v)?,
            "init_omega" => self.init_omega = as_interval(key, v)?,
            "target_speed" => self.target_speed = as_interval(key, v)?,
            "target_distance" => self.target_distance = Some(as_interval(key, v)?),
            "target_same_altitude" => self.target_same_altitude = as_bool(key, v)?,
            "omega_limit" => self.omega_limit = as_f64(key, v)?,
            "max_steps" => self.max_steps = as_u32(key, v)?,
            "substeps" => self.substeps = as_u32(key, v)?,
            "interceptor_speed" => self.interceptor_speed = as_interval(key, v)?,
            "interceptor_accel" => self.interceptor_accel = as_interval(key, v)?,
            "interceptor_lead" => self.interceptor_lead = as_interval(key, v)?,
            "interceptor_deadzone" => self.interceptor_deadzone = as_interval(key, v)?,
            "spawn_radius_factor" => self.spawn_radius_factor = as_f64(key, v)?,
            "pursuer_spawn_radius" => self.pursuer_spawn_radius = as_f64(key, v)?,
            "pursuit_speed_factor" => self.pursuit_speed_factor = as_f64(key, v)?,
            "pursuit_direction" => self.pursuit_direction = as_str(key, v)?.parse()?,
            "mass" => self.uav.mass = as_f64(key, v)?,
            "f_max0" => self.uav.f_max0 = as_f64(key, v)?,
            "inertia" => self.uav.inertia = as_f64(key, v)?,
            "drag_area" => self.uav.drag_area = as_f64(key, v)?,
            "arm" => self.uav.arm = as_f64(key, v)?,
            "control_period" => self.uav.control_period = as_f64(key, v)?,
            "v_max" => self.limits.v_max = as_f64(key, v)?,
            "a_max" => self.limits.a_max = as_f64(key, v)?,
            "boundary_penalty" => self.reward.boundary_penalty = as_f64(key, v)?,
            "spin_penalty" => self.reward.spin_penalty = as_f64(key, v)?,
            "intercept_penalty" => self.reward.intercept_penalty = as_f64(key, v)?,
            "intercept_bonus" => self.reward.intercept_bonus = as_f64(key, v)?,
            "success_scale" => self.reward.success_scale = as_f64(key, v)?,
            "stop_radius" => self.reward.stop_radius = as_f64(key, v)?,
            "vel_epsilon" => self.reward.vel_epsilon = as_f64(key, v)?,
            "tmin_epsilon" => self.reward.tmin_epsilon = as_f64(key, v)?,
            "final_reward_denominator" => {
                self.reward.final_reward_denominator = as_str(key, v)?
                    .parse::<FinalRewardDenominator>()
                    .map_err(|e| cfg_err(e.to_string()))?
            }
            "rho0" => self.atmosphere.rho0 = as_f64(key, v)?,
            "t0" => self.atmosphere.t0 = as_f64(key, v)?,
            "lapse_rate" => self.atmosphere.lapse_rate = as_f64(key, v)?,
            "g0" => self.atmosphere.g0 = as_f64(key, v)?,
            "gas_constant" => self.atmosphere.gas_constant = as_f64(key, v)?,
            other => return Err(cfg_err(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let intervals = [
            ("world_x", self.world_x),
            ("world_h", self.world_h),
            ("spawn_x", self.spawn_x),
            ("spawn_h", self.spawn_h),
            ("init_speed", self.init_speed),
            ("init_tilt", self.init_tilt),
            ("init_omega", self.init_omega),
            ("target_speed", self.target_speed),
            ("interceptor_speed", self.interceptor_speed),
            ("interceptor_accel", self.interceptor_accel),
            ("interceptor_lead", self.interceptor_lead),
            ("interceptor_deadzone", self.interceptor_deadzone),
        ];
        for (name, iv) in intervals {
            if !iv.is_valid() {
                return Err(cfg_err(format!("{name}: interval [{}, {}] is empty or not finite", iv.lo, iv.hi)));
            }
        }
        if let Some(d) = self.target_distance {
            if !d.is_valid() || d.lo < 0.0 {
                return Err(cfg_err("target_distance: must be a non-negative interval"));
            }
        }
        if !self.spawn_x.within(&self.world_x) || !self.spawn_h.within(&self.world_h) {
            return Err(cfg_err("spawn region must lie inside the world region"));
        }
        if self.init_speed.lo < 0.0 || self.target_speed.lo < 0.0 {
            return Err(cfg_err("speed intervals must be non-negative"));
        }
        if self.interceptor_speed.lo <= 0.0 {
            return Err(cfg_err("interceptor_speed must be positive"));
        }
        if self.interceptor_accel.lo < 0.0 || self.interceptor_deadzone.lo < 0.0 {
            return Err(cfg_err("interceptor_accel and interceptor_deadzone must be non-negative"));
        }
        if !self.interceptor_lead.within(&Interval::new(0.0, 1.0)) {
            return Err(cfg_err("interceptor_lead must lie within [0, 1]"));
        }
        if self.max_steps < 1 {
            return Err(cfg_err("max_steps must be at least 1"));
        }
        if self.substeps < 1 {
            return Err(cfg_err("substeps must be at least 1"));
        }
        let positives = [
            ("omega_limit", self.omega_limit),
            ("spawn_radius_factor", self.spawn_radius_factor),
            ("pursuer_spawn_radius", self.pursuer_spawn_radius),
        ];
        for (name, value) in positives {
            if !(value > 0.0 && value.is_finite()) {
                return Err(cfg_err(format!("{name} must be positive, got {value}")));
            }
        }
        if !(self.pursuit_speed_factor >= 0.0 && self.pursuit_speed_factor.is_finite()) {
            return Err(cfg_err("pursuit_speed_factor must be non-negative"));
        }
        self.uav.validate().map_err(|e| cfg_err(e.to_string()))?;
        self.limits.validate().map_err(|e| cfg_err(e.to_string()))?;
        self.reward.validate().map_err(|e| cfg_err(e.to_string()))?;
        self.atmosphere.validate().map_err(|e| cfg_err(e.to_string()))?;
        Ok(())
    }

    /// Renders every key in the file format; parsing the output yields `self` again.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let iv = |i: &Interval| format!("[{:?}, {:?}]", i.lo, i.hi);
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("world_x", iv(&self.world_x));
        line("world_h", iv(&self.world_h));
        line("spawn_x", iv(&self.spawn_x));
        line("spawn_h", iv(&self.spawn_h));
        line("init_speed", iv(&self.init_speed));
        line("init_tilt", iv(&self.init_tilt));
        line("init_omega", iv(&self.init_omega));
        line("target_speed", iv(&self.target_speed));
        if let Some(d) = &self.target_distance {
            line("target_distance", iv(d));
        }
        line("target_same_altitude", self.target_same_altitude.to_string());
        line("omega_limit", format!("{:?}", self.omega_limit));
        line("max_steps", self.max_steps.to_string());
        line("substeps", self.substeps.to_string());
        line("interceptor_speed", iv(&self.interceptor_speed));
        line("interceptor_accel", iv(&self.interceptor_accel));
        line("interceptor_lead", iv(&self.interceptor_lead));
        line("interceptor_deadzone", iv(&self.interceptor_deadzone));
        line("spawn_radius_factor", format!("{:?}", self.spawn_radius_factor));
        line("pursuer_spawn_radius", format!("{:?}", self.pursuer_spawn_radius));
        line("pursuit_speed_factor", format!("{:?}", self.pursuit_speed_factor));
        line("pursuit_direction", format!("\"{}\"", self.pursuit_direction));
        line("mass", format!("{:?}", self.uav.mass));
        line("f_max0", format!("{:?}", self.uav.f_max0));
        line("inertia", format!("{:?}", self.uav.inertia));
        line("drag_area", format!("{:?}", self.uav.drag_area));
        line("arm", format!("{:?}", self.uav.arm));
        line("control_period", format!("{:?}", self.uav.control_period));
        line("v_max", format!("{:?}", self.limits.v_max));
        line("a_max", format!("{:?}", self.limits.a_max));
        line("boundary_penalty", format!("{:?}", self.reward.boundary_penalty));
        line("spin_penalty", format!("{:?}", self.reward.spin_penalty));
        line("intercept_penalty", format!("{:?}", self.reward.intercept_penalty));
        line("intercept_bonus", format!("{:?}", self.reward.intercept_bonus));
        line("success_scale", format!("{:?}", self.reward.success_scale));
        line("stop_radius", format!("{:?}", self.reward.stop_radius));
        line("vel_epsilon", format!("{:?}", self.reward.vel_epsilon));
        line("tmin_epsilon", format!("{:?}", self.reward.tmin_epsilon));
        line("final_reward_denominator", format!("\"{}\"", self.reward.final_reward_denominator));
        line("rho0", format!("{:?}", self.atmosphere.rho0));
        line("t0", format!("{:?}", self.atmosphere.t0));
        line("lapse_rate", format!("{:?}", self.atmosphere.lapse_rate));
        line("g0", format!("{:?}", self.atmosphere.g0));
        line("gas_constant", format!("{:?}", self.atmosphere.gas_constant));
        out
    }
}
