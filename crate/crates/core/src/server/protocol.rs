//! Request parsing and reply construction for the line protocol.
//!
//! Requests:
//!
//! ```text
//! {"cmd":"spec"}
//! {"cmd":"reset","scenario":1,"seed":7}
//! {"cmd":"step","actions":{"evader":[0.5,0.5]}}
//! {"cmd":"close"}
//! ```
//!
//! Replies are `{"ok":true, ...}` or `{"ok":false,"error":"<code>","detail":"<text>"}`.

use serde_json::{json, Map, Value};

use crate::config::EpisodeConfig;
use crate::dynamics::ControlInput;
use crate::env::{
    Actions, Agent, PerAgent, Scenario, ACTION_DIM, OBSERVATION_DIM, OBSERVATION_FIELDS,
};

pub const PROTOCOL_VERSION: u32 = 1;

/// Error codes carried in the `error` field of a failed reply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    BadRequest,
    BadAction,
    NoEpisode,
    EpisodeDone,
    ResetFailed,
    Internal,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::BadRequest => "bad_request",
            Self::BadAction => "bad_action",
            Self::NoEpisode => "no_episode",
            Self::EpisodeDone => "episode_done",
            Self::ResetFailed => "reset_failed",
            Self::Internal => "internal",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolError {
    pub code: ErrorCode,
    pub detail: String,
}

impl ProtocolError {
    pub fn new(code: ErrorCode, detail: impl Into<String>) -> Self {
        Self { code, detail: detail.into() }
    }

    pub fn to_reply(&self) -> Value {
        json!({ "ok": false, "error": self.code.as_str(), "detail": self.detail })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Request {
    Spec,
    Reset { scenario: Scenario, seed: u64 },
    Step { actions: Actions },
    Close,
}

fn bad_request(detail: impl Into<String>) -> ProtocolError {
    ProtocolError::new(ErrorCode::BadRequest, detail)
}

fn bad_action(detail: impl Into<String>) -> ProtocolError {
    ProtocolError::new(ErrorCode::BadAction, detail)
}

fn parse_action(name: &str, v: &Value) -> Result<ControlInput, ProtocolError> {
    let items = v
        .as_array()
        .ok_or_else(|| bad_action(format!("action for {name:?} must be an array")))?;
    if items.len() != ACTION_DIM {
        return Err(bad_action(format!(
            "action for {name:?} has {} components, expected {ACTION_DIM}",
            items.len()
        )));
    }
    let mut out = [0.0; ACTION_DIM];
    for (slot, item) in out.iter_mut().zip(items) {
        *slot = item
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| bad_action(format!("action for {name:?} must contain finite numbers")))?;
    }
    Ok(ControlInput::new(out[0], out[1]))
}

fn parse_actions(v: &Value) -> Result<Actions, ProtocolError> {
    let map = v.as_object().ok_or_else(|| bad_request("\"actions\" must be an object"))?;
    let mut actions = Actions::default();
    for (name, value) in map {
        match name.as_str() {
            "evader" => actions.evader = Some(parse_action(name, value)?),
            "interceptor" => actions.interceptor = Some(parse_action(name, value)?),
            other => return Err(bad_action(format!("unknown agent {other:?}"))),
        }
    }
    Ok(actions)
}

/// Parses one request line.
pub fn parse_request(line: &str) -> Result<Request, ProtocolError> {
    let value: Value =
        serde_json::from_str(line).map_err(|e| bad_request(format!("invalid JSON: {e}")))?;
    let obj = value.as_object().ok_or_else(|| bad_request("request must be a JSON object"))?;
    let cmd = obj
        .get("cmd")
        .and_then(Value::as_str)
        .ok_or_else(|| bad_request("missing string field \"cmd\""))?;
    match cmd {
        "spec" => Ok(Request::Spec),
        "close" => Ok(Request::Close),
        "reset" => {
            let scenario = obj
                .get("scenario")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad_request("reset needs an integer \"scenario\""))?;
            let scenario = u8::try_from(scenario)
                .ok()
                .and_then(|n| Scenario::try_from(n).ok())
                .ok_or_else(|| bad_request(format!("unknown scenario {scenario}")))?;
            let seed = obj
                .get("seed")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad_request("reset needs a non-negative integer \"seed\""))?;
            Ok(Request::Reset { scenario, seed })
        }
        "step" => {
            let actions = obj.get("actions").ok_or_else(|| bad_request("step needs \"actions\""))?;
            Ok(Request::Step { actions: parse_actions(actions)? })
        }
        other => Err(bad_request(format!("unknown cmd {other:?}"))),
    }
}

/// Static description of the environment returned by `spec`.
pub fn spec_reply(cfg: &EpisodeConfig) -> Value {
    let agents: Map<String, Value> = Scenario::ALL
        .iter()
        .map(|s| {
            let names: Vec<&str> = s.agents().iter().map(|a| a.name()).collect();
            (s.to_string(), json!(names))
        })
        .collect();
    json!({
        "ok": true,
        "protocol_version": PROTOCOL_VERSION,
        "scenarios": [1, 2, 3],
        "agents": agents,
        "observation_dim": OBSERVATION_DIM,
        "observation_fields": OBSERVATION_FIELDS,
        "action_dim": ACTION_DIM,
        "action_low": 0.0,
        "action_high": 1.0,
        "control_period": cfg.uav.control_period,
        "max_steps": cfg.max_steps,
        "world_x": [cfg.world_x.lo, cfg.world_x.hi],
        "world_h": [cfg.world_h.lo, cfg.world_h.hi],
    })
}

/// `{"evader": ..., "interceptor": ...}` with the interceptor omitted when absent.
pub fn per_agent_json<T: serde::Serialize + Copy>(values: &PerAgent<T>) -> Value {
    let mut map = Map::new();
    for agent in [Agent::Evader, Agent::Interceptor] {
        if let Some(v) = values.get(agent) {
            map.insert(agent.name().to_string(), serde_json::to_value(v).expect("serializable"));
        }
    }
    Value::Object(map)
}
