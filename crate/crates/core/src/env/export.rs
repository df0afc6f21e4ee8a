//! Comma-separated trajectory export: one row per control step.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Actions, Opponent, Scenario, StepOutcome};
use crate::error::{Result, SimError};

const BASE_COLUMNS: [&str; 12] =
    ["step", "t", "x", "H", "vx", "vy", "beta", "omega", "a1", "a2", "tmin", "reward"];
const IDEAL_COLUMNS: [&str; 4] = ["m_x", "m_H", "m_heading", "m_speed"];
const PURSUER_COLUMNS: [&str; 10] = [
    "i_x", "i_H", "i_vx", "i_vy", "i_beta", "i_omega", "i_a1", "i_a2", "i_tmin", "i_reward",
];

/// One exported step, already flattened to numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub step: u32,
    pub values: Vec<f64>,
}

impl TrajectoryRow {
    pub fn from_outcome(outcome: &StepOutcome, actions: &Actions) -> Self {
        let info = &outcome.info;
        let s = &info.evader_state;
        let a = actions.evader.unwrap_or_default();
        let mut values = vec![
            info.time,
            s.x,
            s.altitude,
            s.vx,
            s.vy,
            s.tilt,
            s.omega,
            a.a1,
            a.a2,
            info.tmin.evader,
            outcome.rewards.evader,
        ];
        match &info.opponent {
            Opponent::None => {}
            Opponent::Ideal { state, params } => {
                values.extend([state.x, state.altitude, state.heading, params.speed]);
            }
            Opponent::Uav { state } => {
                let a = actions.interceptor.unwrap_or_default();
                values.extend([
                    state.x,
                    state.altitude,
                    state.vx,
                    state.vy,
                    state.tilt,
                    state.omega,
                    a.a1,
                    a.a2,
                    info.tmin.interceptor.unwrap_or(f64::NAN),
                    outcome.rewards.interceptor.unwrap_or(f64::NAN),
                ]);
            }
        }
        Self { step: info.step, values }
    }
}

/// Accumulates rows for an episode and writes them as CSV with a header.
#[derive(Debug, Clone)]
pub struct TrajectoryRecorder {
    scenario: Scenario,
    rows: Vec<TrajectoryRow>,
}

impl TrajectoryRecorder {
    pub fn new(scenario: Scenario) -> Self {
        Self { scenario, rows: Vec::new() }
    }

    pub fn header(scenario: Scenario) -> Vec<&'static str> {
        let mut cols: Vec<&str> = BASE_COLUMNS.to_vec();
        match scenario {
            Scenario::FlyToPoint => {}
            Scenario::EvadeInterceptor => cols.extend(IDEAL_COLUMNS),
            Scenario::UavDuel => cols.extend(PURSUER_COLUMNS),
        }
        cols
    }

    pub fn record(&mut self, outcome: &StepOutcome, actions: &Actions) {
        self.rows.push(TrajectoryRow::from_outcome(outcome, actions));
    }

    pub fn push_row(&mut self, row: TrajectoryRow) {
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[TrajectoryRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| SimError::InvalidArgument(format!("writing trajectory: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::header(self.scenario)).map_err(io)?;
        for row in &self.rows {
            let mut record = Vec::with_capacity(row.values.len() + 1);
            record.push(row.step.to_string());
            record.extend(row.values.iter().map(|v| format!("{v:?}")));
            w.write_record(&record).map_err(io)?;
        }
        w.flush().map_err(|e| SimError::InvalidArgument(format!("writing trajectory: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn write_to_path(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        std::fs::write(path, self.to_csv_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::EpisodeConfig;
    use crate::dynamics::ControlInput;
    use crate::env::Episode;

    #[test]
    fn header_and_row_widths_agree() {
        let cfg = EpisodeConfig { max_steps: 3, ..Default::default() };
        for scenario in Scenario::ALL {
            let (mut ep, _) = Episode::reset(scenario, 11, &cfg).unwrap();
            let mut rec = TrajectoryRecorder::new(scenario);
            let u = ControlInput::symmetric(0.6);
            let actions = match scenario {
                Scenario::UavDuel => Actions::pair(u, u),
                _ => Actions::single(u),
            };
            while !ep.is_done() {
                let out = ep.step(&actions).unwrap();
                rec.record(&out, &actions);
            }
            let text = rec.to_csv_string();
            let lines: Vec<&str> = text.lines().collect();
            assert_eq!(lines.len(), rec.len() + 1);
            let width = TrajectoryRecorder::header(scenario).len();
            for line in &lines {
                assert_eq!(line.split(',').count(), width, "{line}");
            }
            assert!(lines[0].starts_with("step,t,x,H,vx,vy,beta,omega,a1,a2,tmin,reward"));
        }
    }
}
