//! Planar rigid-body model of a two-rotor (planar quadcopter) UAV.
//!
//! Both rotor forces act perpendicular to the body axis. With the axis tilted by `β` from
//! horizontal, the thrust direction is `(sin(−β), cos β)`. Drag is quadratic in airspeed and
//! opposes the velocity; there is no ½ factor in the drag term.

use serde::{Deserialize, Serialize};

use crate::atmosphere::{AtmosphereModel, TROPOPAUSE};
use crate::error::{invalid, Result, SimError};
use crate::vector::{wrap_angle, PlanarVector};

const REST_SPEED: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UavParams {
    /// kg
    pub mass: f64,
    /// Maximum thrust of one rotor at sea level, N.
    pub f_max0: f64,
    /// Moment of inertia about the out-of-plane axis, kg·m².
    pub inertia: f64,
    /// Drag coefficient times reference area, m².
    pub drag_area: f64,
    /// Rotor moment arm about the centre of mass, m.
    pub arm: f64,
    /// Interval between control updates, s.
    pub control_period: f64,
}

impl Default for UavParams {
    fn default() -> Self {
        Self {
            mass: 5.0,
            f_max0: 42.0,
            inertia: 1.25,
            drag_area: 0.2,
            arm: 0.5,
            control_period: 0.05,
        }
    }
}

impl UavParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mass", self.mass),
            ("f_max0", self.f_max0),
            ("inertia", self.inertia),
            ("drag_area", self.drag_area),
            ("arm", self.arm),
            ("control_period", self.control_period),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(invalid(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }

    /// Per-rotor command that balances gravity with a level axis at `altitude`.
    pub fn hover_command(&self, atmos: &AtmosphereModel, altitude: f64) -> f64 {
        self.mass * atmos.g0 / (2.0 * self.max_thrust(atmos, altitude))
    }

    /// Maximum thrust of one rotor at `altitude` (N).
    pub fn max_thrust(&self, atmos: &AtmosphereModel, altitude: f64) -> f64 {
        self.f_max0 * atmos.thrust_scale_unchecked(altitude.clamp(0.0, TROPOPAUSE - 1.0))
    }
}

/// Full rigid-body state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct UavState {
    pub x: f64,
    /// Height above the surface, m.
    pub altitude: f64,
    pub vx: f64,
    pub vy: f64,
    /// Inclination of the body axis from horizontal, rad, in (−π, π].
    pub tilt: f64,
    /// rad/s
    pub omega: f64,
    /// s
    pub time: f64,
}

impl UavState {
    pub fn position(&self) -> PlanarVector {
        PlanarVector::new(self.x, self.altitude)
    }

    pub fn velocity(&self) -> PlanarVector {
        PlanarVector::new(self.vx, self.vy)
    }

    pub fn speed(&self) -> f64 {
        self.velocity().norm()
    }

    /// Unit vector along the body axis.
    pub fn axis(&self) -> PlanarVector {
        PlanarVector::from_angle(self.tilt)
    }

    pub fn is_finite(&self) -> bool {
        [self.x, self.altitude, self.vx, self.vy, self.tilt, self.omega, self.time]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Relative rotor commands, each clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ControlInput {
    pub a1: f64,
    pub a2: f64,
}

impl ControlInput {
    /// Clamps both commands into `[0, 1]`; NaN becomes 0.
    pub fn new(a1: f64, a2: f64) -> Self {
        let clamp = |a: f64| if a.is_nan() { 0.0 } else { a.clamp(0.0, 1.0) };
        Self { a1: clamp(a1), a2: clamp(a2) }
    }

    pub fn symmetric(a: f64) -> Self {
        Self::new(a, a)
    }
}

/// Time derivative of [`UavState`] (excluding time itself).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StateDerivative {
    pub dx: f64,
    pub daltitude: f64,
    pub dvx: f64,
    pub dvy: f64,
    pub dtilt: f64,
    pub domega: f64,
}

/// Drag acceleration vector, `−C_xS·ρ·|v|·v / m`.
pub fn drag_acceleration(state: &UavState, params: &UavParams, atmos: &AtmosphereModel) -> PlanarVector {
    let rho = atmos.density_unchecked(state.altitude.clamp(0.0, TROPOPAUSE - 1.0));
    let v = state.velocity();
    v * (-params.drag_area * rho * v.norm() / params.mass)
}

/// Right-hand side of the equations of motion.
///
/// Atmospheric quantities are evaluated at the altitude clamped into the modelled range, so
/// the function stays defined for the transient states just outside the world box.
pub fn derivatives(
    state: &UavState,
    control: &ControlInput,
    params: &UavParams,
    atmos: &AtmosphereModel,
) -> StateDerivative {
    let f_max = params.max_thrust(atmos, state.altitude);
    let thrust_acc = f_max * (control.a1 + control.a2) / params.mass;
    let drag = drag_acceleration(state, params, atmos);
    let (sin_b, cos_b) = state.tilt.sin_cos();
    StateDerivative {
        dx: state.vx,
        daltitude: state.vy,
        dvx: -thrust_acc * sin_b + drag.x,
        dvy: thrust_acc * cos_b - atmos.g0 + drag.y,
        dtilt: state.omega,
        domega: params.arm * f_max * (control.a2 - control.a1) / params.inertia,
    }
}

/// Angle of attack: velocity direction relative to the body axis, in (−π, π].
pub fn angle_of_attack(state: &UavState) -> f64 {
    if state.speed() < REST_SPEED {
        0.0
    } else {
        wrap_angle(state.vy.atan2(state.vx) - state.tilt)
    }
}

fn offset(s: &UavState, k: &StateDerivative, h: f64) -> UavState {
    UavState {
        x: s.x + h * k.dx,
        altitude: s.altitude + h * k.daltitude,
        vx: s.vx + h * k.dvx,
        vy: s.vy + h * k.dvy,
        tilt: s.tilt + h * k.dtilt,
        omega: s.omega + h * k.domega,
        time: s.time + h,
    }
}

/// One classical RK4 stage of width `h`. Tilt is left unwrapped.
pub fn rk4_substep(
    state: &UavState,
    control: &ControlInput,
    params: &UavParams,
    atmos: &AtmosphereModel,
    h: f64,
) -> UavState {
    let k1 = derivatives(state, control, params, atmos);
    let k2 = derivatives(&offset(state, &k1, h / 2.0), control, params, atmos);
    let k3 = derivatives(&offset(state, &k2, h / 2.0), control, params, atmos);
    let k4 = derivatives(&offset(state, &k3, h), control, params, atmos);
    let w = h / 6.0;
    UavState {
        x: state.x + w * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
        altitude: state.altitude
            + w * (k1.daltitude + 2.0 * k2.daltitude + 2.0 * k3.daltitude + k4.daltitude),
        vx: state.vx + w * (k1.dvx + 2.0 * k2.dvx + 2.0 * k3.dvx + k4.dvx),
        vy: state.vy + w * (k1.dvy + 2.0 * k2.dvy + 2.0 * k3.dvy + k4.dvy),
        tilt: state.tilt + w * (k1.dtilt + 2.0 * k2.dtilt + 2.0 * k3.dtilt + k4.dtilt),
        omega: state.omega + w * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega),
        time: state.time + h,
    }
}

/// Advances `state` by `dt` with the control held constant, using `substeps` RK4 stages.
pub fn step(
    state: &UavState,
    control: &ControlInput,
    params: &UavParams,
    atmos: &AtmosphereModel,
    dt: f64,
    substeps: u32,
) -> Result<UavState> {
    step_observed(state, control, params, atmos, dt, substeps, |_, _| {})
}

/// Like [`step`], calling `observe(k, &state)` after every substep `k = 1..=substeps`.
/// The observed states carry unwrapped tilt.
pub fn step_observed(
    state: &UavState,
    control: &ControlInput,
    params: &UavParams,
    atmos: &AtmosphereModel,
    dt: f64,
    substeps: u32,
    mut observe: impl FnMut(u32, &UavState),
) -> Result<UavState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("dt must be positive, got {dt}")));
    }
    if substeps == 0 {
        return Err(invalid("substeps must be at least 1"));
    }
    let control = ControlInput::new(control.a1, control.a2);
    let h = dt / substeps as f64;
    let mut s = *state;
    for k in 1..=substeps {
        s = rk4_substep(&s, &control, params, atmos, h);
        observe(k, &s);
    }
    s.time = state.time + dt;
    s.tilt = wrap_angle(s.tilt);
    if !s.is_finite() {
        return Err(SimError::IntegrationFailure(format!("non-finite state {s:?}")));
    }
    Ok(s)
}
