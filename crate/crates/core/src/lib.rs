//! Planar UAV flight environments driven by a Bezier time-to-go reward.
//!
//! The reward paid to an agent at each step is the reduction of the shortest feasible flight
//! time to its goal, estimated by fitting a boundary-value cubic Bezier curve between the
//! current state and the required terminal state and searching for the smallest duration
//! that keeps speed and acceleration within limits ([`bezier::min_time`]).
//!
//! ```
//! use uavsim::bezier::{min_time, BoundaryConditions, KinematicLimits};
//! use uavsim::PlanarVector;
//!
//! let bc = BoundaryConditions::rest_to_rest(PlanarVector::new(0.0, 0.0), PlanarVector::new(100.0, 0.0));
//! let r = min_time(&bc, &KinematicLimits::default()).unwrap();
//! assert!((r.t_min - 5.976).abs() < 1e-3);
//! ```
//!
//! Episodes live in [`env`]; [`server`] exposes them over TCP.

pub mod atmosphere;
pub mod bezier;
pub mod config;
pub mod dynamics;
pub mod env;
pub mod error;
pub mod interceptor;
pub mod policy;
pub mod reward;
pub mod server;
pub mod vector;

pub use config::EpisodeConfig;
pub use env::{Actions, Agent, Episode, EpisodeStatus, Observation, PerAgent, Scenario, StepOutcome};
pub use error::{Result, SimError};
pub use vector::PlanarVector;
