//! Python bindings: `import pyuavsim`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use uavsim::atmosphere::AtmosphereModel;
use uavsim::bezier::{self, BoundaryConditions, CubicCurve, KinematicLimits};
use uavsim::dynamics::{self, ControlInput, UavParams};
use uavsim::env::{TrajectoryRecorder, OBSERVATION_FIELDS};
use uavsim::policy::{Pilot as CorePilot, PolicyKind};
use uavsim::{Actions, Agent, EpisodeConfig, PlanarVector, Scenario, SimError};

type State4 = (f64, f64, f64, f64);
type Pair = (f64, f64);

fn err(e: SimError) -> PyErr {
    match e {
        SimError::InvalidArgument(_) | SimError::Config(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn vec2(v: PlanarVector) -> Pair {
    (v.x, v.y)
}

fn boundary((x0, y0, vx0, vy0): State4, (x1, y1, vx1, vy1): State4) -> BoundaryConditions {
    BoundaryConditions::new(
        PlanarVector::new(x0, y0),
        PlanarVector::new(vx0, vy0),
        PlanarVector::new(x1, y1),
        PlanarVector::new(vx1, vy1),
    )
}

/// Converts any serializable value into plain Python objects via the `json` module.
fn to_python<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(frozen, get_all)]
struct MinTime {
    t_min: f64,
    feasible: bool,
    iterations: u32,
}

#[pymethods]
impl MinTime {
    fn __repr__(&self) -> String {
        format!("MinTime(t_min={}, feasible={}, iterations={})", self.t_min, self.feasible, self.iterations)
    }
}

/// Shortest feasible duration of the Bezier curve from `start` to `end`, each `(x, y, vx, vy)`.
#[pyfunction]
#[pyo3(signature = (start, end, v_max = 35.0, a_max = 16.8))]
fn min_time(start: State4, end: State4, v_max: f64, a_max: f64) -> PyResult<MinTime> {
    let limits = KinematicLimits::new(v_max, a_max).map_err(err)?;
    let r = bezier::min_time(&boundary(start, end), &limits).map_err(err)?;
    Ok(MinTime { t_min: r.t_min, feasible: r.feasible, iterations: r.iterations })
}

/// Cubic Bezier curve between two states flown in `duration` seconds.
#[pyclass(frozen)]
struct Curve {
    inner: CubicCurve,
}

#[pymethods]
impl Curve {
    #[new]
    fn new(start: State4, end: State4, duration: f64) -> PyResult<Self> {
        Ok(Self { inner: bezier::build_curve(&boundary(start, end), duration).map_err(err)? })
    }

    #[getter]
    fn duration(&self) -> f64 {
        self.inner.duration
    }

    #[getter]
    fn control_points(&self) -> [Pair; 4] {
        let c = &self.inner;
        [vec2(c.p0), vec2(c.p1), vec2(c.p2), vec2(c.p3)]
    }

    fn position(&self, tau: f64) -> PyResult<Pair> {
        self.inner.position(tau).map(vec2).map_err(err)
    }

    fn velocity(&self, tau: f64) -> PyResult<Pair> {
        self.inner.velocity(tau).map(vec2).map_err(err)
    }

    fn acceleration(&self, tau: f64) -> PyResult<Pair> {
        self.inner.acceleration(tau).map(vec2).map_err(err)
    }

    /// `(speed, tau)` at the fastest point.
    fn max_speed(&self) -> Pair {
        self.inner.max_speed()
    }

    /// `(acceleration, tau)` at the harder end.
    fn max_accel(&self) -> Pair {
        self.inner.max_accel()
    }

    #[pyo3(signature = (v_max = 35.0, a_max = 16.8))]
    fn satisfies(&self, v_max: f64, a_max: f64) -> PyResult<bool> {
        Ok(self.inner.satisfies(&KinematicLimits::new(v_max, a_max).map_err(err)?))
    }
}

#[pyclass(frozen)]
struct Atmosphere {
    inner: AtmosphereModel,
}

#[pymethods]
impl Atmosphere {
    #[new]
    fn new() -> Self {
        Self { inner: AtmosphereModel::default() }
    }

    /// Air density (kg/m³) at `altitude` metres.
    fn density(&self, altitude: f64) -> PyResult<f64> {
        self.inner.density(altitude).map_err(err)
    }

    /// Rotor thrust relative to sea level.
    fn thrust_scale(&self, altitude: f64) -> PyResult<f64> {
        self.inner.thrust_scale(altitude).map_err(err)
    }
}

/// Advances a UAV state by `dt` seconds. The state is a dict with keys x, altitude, vx,
/// vy, tilt, omega, time, as found in `Episode.state()["evader"]`.
#[pyfunction]
#[pyo3(signature = (state, a1, a2, dt = 0.05, substeps = 5))]
fn step_uav<'py>(py: Python<'py>, state: &Bound<'py, PyAny>, a1: f64, a2: f64, dt: f64, substeps: u32) -> PyResult<Bound<'py, PyAny>> {
    let text: String = py.import("json")?.call_method1("dumps", (state,))?.extract()?;
    let s: dynamics::UavState = serde_json::from_str(&text).map_err(|e| PyValueError::new_err(format!("bad state: {e}")))?;
    let next = dynamics::step(&s, &ControlInput::new(a1, a2), &UavParams::default(), &AtmosphereModel::default(), dt, substeps)
        .map_err(err)?;
    to_python(py, &next)
}

fn parse_scenario(n: u8) -> PyResult<Scenario> {
    Scenario::try_from(n).map_err(err)
}

fn control(pair: Option<Pair>) -> Option<ControlInput> {
    pair.map(|(a1, a2)| ControlInput::new(a1, a2))
}

/// One episode of scenario 1, 2 or 3.
#[pyclass]
struct Episode {
    inner: uavsim::Episode,
    recorder: TrajectoryRecorder,
}

#[pymethods]
impl Episode {
    /// `config` is the text of a configuration file; defaults apply when omitted.
    #[new]
    #[pyo3(signature = (scenario, seed, config = None))]
    fn new(scenario: u8, seed: u64, config: Option<&str>) -> PyResult<Self> {
        let scenario = parse_scenario(scenario)?;
        let cfg = match config {
            Some(text) => EpisodeConfig::from_config_str(text).map_err(err)?,
            None => EpisodeConfig::default(),
        };
        let (inner, _) = uavsim::Episode::reset(scenario, seed, &cfg).map_err(err)?;
        Ok(Self { inner, recorder: TrajectoryRecorder::new(scenario) })
    }

    #[getter]
    fn scenario(&self) -> u8 {
        self.inner.scenario().number()
    }

    #[getter]
    fn done(&self) -> bool {
        self.inner.is_done()
    }

    #[getter]
    fn status(&self) -> &'static str {
        self.inner.status().as_str()
    }

    /// Full episode state as plain Python data.
    fn state<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, self.inner.state())
    }

    /// Observation of `agent` ("evader" or "interceptor") as 13 floats.
    #[pyo3(signature = (agent = "evader"))]
    fn observe(&self, agent: &str) -> PyResult<Vec<f64>> {
        let agent = match agent {
            "evader" => Agent::Evader,
            "interceptor" => Agent::Interceptor,
            other => return Err(PyValueError::new_err(format!("unknown agent {other:?}"))),
        };
        Ok(self.inner.observe(agent).map_err(err)?.0.to_vec())
    }

    /// Advances one control period. Returns a dict with observations, rewards, done, status, info.
    #[pyo3(signature = (evader, interceptor = None))]
    fn step<'py>(&mut self, py: Python<'py>, evader: Pair, interceptor: Option<Pair>) -> PyResult<Bound<'py, PyAny>> {
        let actions = Actions { evader: control(Some(evader)), interceptor: control(interceptor) };
        let out = self.inner.step(&actions).map_err(err)?;
        self.recorder.record(&out, &actions);
        to_python(py, &out)
    }

    /// Trajectory of the steps taken so far, as CSV text.
    fn trajectory_csv(&self) -> String {
        self.recorder.to_csv_string()
    }
}

/// Scripted controller: "hover", "goto" or "random".
#[pyclass]
struct Pilot {
    inner: CorePilot,
}

#[pymethods]
impl Pilot {
    #[new]
    fn new(kind: &str, episode: &Episode) -> PyResult<Self> {
        let kind: PolicyKind = kind.parse().map_err(err)?;
        Ok(Self { inner: CorePilot::new(kind, &episode.inner) })
    }

    /// `(evader, interceptor)` commands for the current state; `interceptor` is `None`
    /// outside scenario 3.
    fn actions(&mut self, episode: &Episode) -> (Pair, Option<Pair>) {
        let a = self.inner.actions(&episode.inner);
        let pair = |u: ControlInput| (u.a1, u.a2);
        (a.evader.map(pair).unwrap_or_default(), a.interceptor.map(pair))
    }
}

#[pymodule]
fn pyuavsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(min_time, m)?)?;
    m.add_function(wrap_pyfunction!(step_uav, m)?)?;
    m.add_class::<MinTime>()?;
    m.add_class::<Curve>()?;
    m.add_class::<Atmosphere>()?;
    m.add_class::<Episode>()?;
    m.add_class::<Pilot>()?;
    m.add("OBSERVATION_FIELDS", OBSERVATION_FIELDS.to_vec())?;
    Ok(())
}
