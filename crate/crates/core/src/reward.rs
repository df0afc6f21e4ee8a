//! Time-to-go shaping reward and terminal bonuses.
//!
//! Each step pays the decrease of the minimum feasible flight time to the goal, so the
//! shaped part of an episode's return telescopes to `t_min(start) − t_min(end)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, SimError};
use crate::vector::PlanarVector;

/// Which velocity combination goes in the denominator of the arrival bonus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinalRewardDenominator {
    /// `|v_D − v_n|`: bonus grows as the arrival velocity matches the required one.
    Difference,
    /// `|v_D + v_n|`.
    Sum,
}

impl FromStr for FinalRewardDenominator {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "difference" => Ok(Self::Difference),
            "sum" => Ok(Self::Sum),
            other => Err(invalid(format!("unknown final_reward_denominator {other:?}"))),
        }
    }
}

impl fmt::Display for FinalRewardDenominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Difference => "difference",
            Self::Sum => "sum",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardConfig {
    pub boundary_penalty: f64,
    pub spin_penalty: f64,
    pub intercept_penalty: f64,
    pub intercept_bonus: f64,
    pub success_scale: f64,
    /// Arrival / capture radius, m.
    pub stop_radius: f64,
    /// Floor on the velocity mismatch in the arrival bonus, m/s.
    pub vel_epsilon: f64,
    /// Floor on the final time-to-go in the arrival bonus, s.
    pub tmin_epsilon: f64,
    pub final_reward_denominator: FinalRewardDenominator,
}

impl Default for RewardConfig {
    fn default() -> Self {
        Self {
            boundary_penalty: 100.0,
            spin_penalty: 100.0,
            intercept_penalty: 100.0,
            intercept_bonus: 100.0,
            success_scale: 100.0,
            stop_radius: 10.0,
            vel_epsilon: 0.1,
            tmin_epsilon: 1e-3,
            final_reward_denominator: FinalRewardDenominator::Difference,
        }
    }
}

impl RewardConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("boundary_penalty", self.boundary_penalty),
            ("spin_penalty", self.spin_penalty),
            ("intercept_penalty", self.intercept_penalty),
            ("intercept_bonus", self.intercept_bonus),
            ("success_scale", self.success_scale),
            ("stop_radius", self.stop_radius),
            ("vel_epsilon", self.vel_epsilon),
            ("tmin_epsilon", self.tmin_epsilon),
        ];
        for (name, value) in fields {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(invalid(format!("{name} must be non-negative, got {value}")));
            }
        }
        Ok(())
    }
}

/// Terminal events that carry a flat reward adjustment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalEvent {
    OutOfBounds,
    Overspin,
    /// The evading agent was caught.
    Intercepted,
    /// The intercepting agent caught its target.
    InterceptSuccess,
}

impl FromStr for TerminalEvent {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "out_of_bounds" => Ok(Self::OutOfBounds),
            "overspin" => Ok(Self::Overspin),
            "intercepted" => Ok(Self::Intercepted),
            "intercept_success" => Ok(Self::InterceptSuccess),
            other => Err(invalid(format!("unknown terminal event {other:?}"))),
        }
    }
}

/// Shaped per-step reward: the decrease in estimated time-to-go.
pub fn step_reward(tmin_prev: f64, tmin_curr: f64) -> f64 {
    tmin_prev - tmin_curr
}

/// Final-step reward on arrival: the last shaped reward plus a bonus that grows as the
/// arrival velocity approaches the required one and as the remaining time-to-go shrinks.
pub fn terminal_success(
    r_n: f64,
    v_n: PlanarVector,
    v_d: PlanarVector,
    tmin_n: f64,
    cfg: &RewardConfig,
) -> f64 {
    let mismatch = match cfg.final_reward_denominator {
        FinalRewardDenominator::Difference => (v_d - v_n).norm(),
        FinalRewardDenominator::Sum => (v_d + v_n).norm(),
    };
    let bonus = cfg.success_scale * (2.0 * cfg.stop_radius / mismatch.max(cfg.vel_epsilon))
        / tmin_n.max(cfg.tmin_epsilon);
    r_n + bonus
}

pub fn terminal_adjustment(event: TerminalEvent, cfg: &RewardConfig) -> f64 {
    match event {
        TerminalEvent::OutOfBounds => -cfg.boundary_penalty,
        TerminalEvent::Overspin => -cfg.spin_penalty,
        TerminalEvent::Intercepted => -cfg.intercept_penalty,
        TerminalEvent::InterceptSuccess => cfg.intercept_bonus,
    }
}
