//! Boundary-value cubic Bezier trajectories and the minimum feasible flight time.
//!
//! A trajectory from state `(A, v_A)` to state `(D, v_D)` with duration `Δt` is the cubic
//! Bezier curve with control points
//!
//! ```text
//! p0 = A,  p1 = A + v_A·Δt/3,  p2 = D − v_D·Δt/3,  p3 = D
//! ```
//!
//! so that its velocity at the endpoints matches the boundary velocities. The velocity
//! hodograph is a quadratic Bezier curve and the acceleration hodograph is a line segment.
//! [`min_time`] finds the shortest duration at which both stay within [`KinematicLimits`].

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::vector::PlanarVector;

/// Relative slack on the limit comparisons in [`is_feasible`].
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Relative width at which the bisection in [`min_time`] stops.
pub const SEARCH_TOL: f64 = 1e-6;
/// Largest duration [`min_time`] will consider, in seconds.
pub const T_CAP: f64 = 1e4;
/// Bisection iteration budget.
pub const MAX_BISECTIONS: u32 = 200;

const MIN_GUESS: f64 = 1e-3;
const DEGENERATE_EPS: f64 = 1e-12;
const FALLBACK_GRID: usize = 1025;

/// Start and end states of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryConditions {
    pub start_pos: PlanarVector,
    pub start_vel: PlanarVector,
    pub end_pos: PlanarVector,
    pub end_vel: PlanarVector,
}

impl BoundaryConditions {
    pub fn new(
        start_pos: PlanarVector,
        start_vel: PlanarVector,
        end_pos: PlanarVector,
        end_vel: PlanarVector,
    ) -> Self {
        Self { start_pos, start_vel, end_pos, end_vel }
    }

    /// Both ends at rest.
    pub fn rest_to_rest(start_pos: PlanarVector, end_pos: PlanarVector) -> Self {
        Self::new(start_pos, PlanarVector::ZERO, end_pos, PlanarVector::ZERO)
    }

    pub fn is_finite(&self) -> bool {
        self.start_pos.is_finite()
            && self.start_vel.is_finite()
            && self.end_pos.is_finite()
            && self.end_vel.is_finite()
    }

    /// Same point, both velocities (numerically) zero: every duration is feasible.
    pub fn is_degenerate(&self) -> bool {
        self.start_pos.distance(self.end_pos) <= DEGENERATE_EPS
            && self.start_vel.norm() < DEGENERATE_EPS
            && self.end_vel.norm() < DEGENERATE_EPS
    }
}

/// Speed and acceleration bounds for a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicLimits {
    /// m/s
    pub v_max: f64,
    /// m/s²
    pub a_max: f64,
}

impl KinematicLimits {
    pub fn new(v_max: f64, a_max: f64) -> Result<Self> {
        let limits = Self { v_max, a_max };
        limits.validate()?;
        Ok(limits)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_max > 0.0 && self.v_max.is_finite()) {
            return Err(invalid(format!("v_max must be positive, got {}", self.v_max)));
        }
        if !(self.a_max > 0.0 && self.a_max.is_finite()) {
            return Err(invalid(format!("a_max must be positive, got {}", self.a_max)));
        }
        Ok(())
    }
}

impl Default for KinematicLimits {
    fn default() -> Self {
        Self { v_max: 35.0, a_max: 16.8 }
    }
}

/// A cubic Bezier curve traversed in `duration` seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCurve {
    pub p0: PlanarVector,
    pub p1: PlanarVector,
    pub p2: PlanarVector,
    pub p3: PlanarVector,
    pub duration: f64,
}

/// Outcome of [`min_time`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinTimeResult {
    /// Shortest feasible duration found (s). Meaningless when `feasible` is false.
    pub t_min: f64,
    pub feasible: bool,
    /// Number of feasibility evaluations spent.
    pub iterations: u32,
}

fn check_duration(duration: f64) -> Result<()> {
    if duration > 0.0 && duration.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("duration must be positive and finite, got {duration}")))
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if (0.0..=1.0).contains(&tau) {
        Ok(())
    } else {
        Err(invalid(format!("curve parameter must lie in [0, 1], got {tau}")))
    }
}

/// Builds the boundary-value curve for `bc` with the given duration.
pub fn build_curve(bc: &BoundaryConditions, duration: f64) -> Result<CubicCurve> {
    check_duration(duration)?;
    if !bc.is_finite() {
        return Err(invalid("boundary conditions must be finite"));
    }
    let third = duration / 3.0;
    Ok(CubicCurve {
        p0: bc.start_pos,
        p1: bc.start_pos + bc.start_vel * third,
        p2: bc.end_pos - bc.end_vel * third,
        p3: bc.end_pos,
        duration,
    })
}

impl CubicCurve {
    /// Validates and constructs a curve from raw control points.
    pub fn new(
        p0: PlanarVector,
        p1: PlanarVector,
        p2: PlanarVector,
        p3: PlanarVector,
        duration: f64,
    ) -> Result<Self> {
        check_duration(duration)?;
        if ![p0, p1, p2, p3].iter().all(|p| p.is_finite()) {
            return Err(invalid("control points must be finite"));
        }
        Ok(Self { p0, p1, p2, p3, duration })
    }

    /// Differences of consecutive control points, i.e. the velocity hodograph
    /// control points scaled by `Δt/3`.
    fn hodograph(&self) -> [PlanarVector; 3] {
        [self.p1 - self.p0, self.p2 - self.p1, self.p3 - self.p2]
    }

    /// Position at curve parameter `tau`.
    pub fn position(&self, tau: f64) -> Result<PlanarVector> {
        check_tau(tau)?;
        let s = 1.0 - tau;
        let b0 = s * s * s;
        let b1 = 3.0 * tau * s * s;
        let b2 = 3.0 * tau * tau * s;
        let b3 = tau * tau * tau;
        Ok(self.p0 * b0 + self.p1 * b1 + self.p2 * b2 + self.p3 * b3)
    }

    /// Velocity (m/s) at curve parameter `tau`.
    pub fn velocity(&self, tau: f64) -> Result<PlanarVector> {
        check_tau(tau)?;
        let [d0, d1, d2] = self.hodograph();
        let s = 1.0 - tau;
        let h = d0 * (s * s) + d1 * (2.0 * tau * s) + d2 * (tau * tau);
        Ok(h * (3.0 / self.duration))
    }

    /// Acceleration (m/s²) at curve parameter `tau`. Affine in `tau`.
    pub fn acceleration(&self, tau: f64) -> Result<PlanarVector> {
        check_tau(tau)?;
        let [d0, d1, d2] = self.hodograph();
        let h = d0 * (tau - 1.0) + d1 * (1.0 - 2.0 * tau) + d2 * tau;
        Ok(h * (6.0 / (self.duration * self.duration)))
    }

    /// Global maximum of the speed over `tau ∈ [0, 1]`, with the parameter attaining it.
    pub fn max_speed(&self) -> (f64, f64) {
        let [d0, d1, d2] = self.hodograph();
        let (norm, tau) = max_quadratic_bezier_norm(d0, d1, d2);
        (norm * 3.0 / self.duration, tau)
    }

    /// Maximum acceleration magnitude. The acceleration hodograph is a segment, so the
    /// maximum of its (convex) norm sits at an endpoint; returns `tau ∈ {0, 1}`.
    pub fn max_accel(&self) -> (f64, f64) {
        let [d0, d1, d2] = self.hodograph();
        let scale = 6.0 / (self.duration * self.duration);
        let a0 = (d1 - d0).norm() * scale;
        let a1 = (d2 - d1).norm() * scale;
        if a1 > a0 {
            (a1, 1.0)
        } else {
            (a0, 0.0)
        }
    }

    pub fn satisfies(&self, limits: &KinematicLimits) -> bool {
        let slack = 1.0 + FEASIBILITY_TOL;
        self.max_speed().0 <= limits.v_max * slack && self.max_accel().0 <= limits.a_max * slack
    }
}

/// Whether the curve for `bc` at `duration` respects `limits`.
pub fn is_feasible(bc: &BoundaryConditions, duration: f64, limits: &KinematicLimits) -> Result<bool> {
    Ok(build_curve(bc, duration)?.satisfies(limits))
}

/// Searches for the shortest duration whose curve respects `limits`.
///
/// The bracket starts from the rest-to-rest estimate `max(1.5d/v_max, √(6d/a_max))`, doubles
/// until feasible (halves until infeasible if the guess already is), then bisects down to
/// [`SEARCH_TOL`]. Returns `feasible = false` if nothing up to [`T_CAP`] works.
pub fn min_time(bc: &BoundaryConditions, limits: &KinematicLimits) -> Result<MinTimeResult> {
    limits.validate()?;
    if !bc.is_finite() {
        return Err(invalid("boundary conditions must be finite"));
    }
    if bc.is_degenerate() {
        return Ok(MinTimeResult { t_min: 0.0, feasible: true, iterations: 0 });
    }

    let mut iterations = 0u32;
    let mut feasible = |t: f64| -> bool {
        iterations += 1;
        // duration is positive and finite and bc is finite here
        build_curve(bc, t).map(|c| c.satisfies(limits)).unwrap_or(false)
    };

    let d = bc.start_pos.distance(bc.end_pos);
    let guess = (1.5 * d / limits.v_max)
        .max((6.0 * d / limits.a_max).sqrt())
        .max(MIN_GUESS)
        .min(T_CAP);

    let (mut lo, mut hi);
    if feasible(guess) {
        hi = guess;
        lo = guess * 0.5;
        while feasible(lo) {
            hi = lo;
            lo *= 0.5;
            if lo < f64::MIN_POSITIVE.sqrt() {
                return Ok(MinTimeResult { t_min: hi, feasible: true, iterations });
            }
        }
    } else {
        lo = guess;
        hi = guess * 2.0;
        loop {
            if hi >= T_CAP {
                hi = T_CAP;
                if feasible(hi) {
                    break;
                }
                return Ok(MinTimeResult { t_min: T_CAP, feasible: false, iterations });
            }
            if feasible(hi) {
                break;
            }
            lo = hi;
            hi *= 2.0;
        }
    }

    let mut bisections = 0;
    while hi - lo > SEARCH_TOL * hi && bisections < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        bisections += 1;
    }
    Ok(MinTimeResult { t_min: hi, feasible: true, iterations })
}

/// Maximum over `tau ∈ [0,1]` of `|(1−τ)²h0 + 2τ(1−τ)h1 + τ²h2|`.
///
/// Writes the curve as `aτ² + bτ + c`; the stationary points of the squared norm are roots
/// of `2|a|²τ³ + 3(a·b)τ² + (|b|² + 2a·c)τ + b·c`.
fn max_quadratic_bezier_norm(h0: PlanarVector, h1: PlanarVector, h2: PlanarVector) -> (f64, f64) {
    let a = h0 - h1 * 2.0 + h2;
    let b = (h1 - h0) * 2.0;
    let c = h0;
    let eval = |t: f64| (a * (t * t) + b * t + c).norm();

    let coeffs = [
        2.0 * a.norm_squared(),
        3.0 * a.dot(b),
        b.norm_squared() + 2.0 * a.dot(c),
        b.dot(c),
    ];

    let mut best = (eval(0.0), 0.0);
    let end = eval(1.0);
    if end > best.0 {
        best = (end, 1.0);
    }

    match real_cubic_roots(coeffs) {
        Some(roots) => {
            for t in roots.into_iter().filter(|t| (0.0..=1.0).contains(t)) {
                let n = eval(t);
                if n > best.0 {
                    best = (n, t);
                }
            }
            best
        }
        None => {
            let grid = grid_maximum(&eval, FALLBACK_GRID);
            if grid.0 > best.0 {
                grid
            } else {
                best
            }
        }
    }
}

/// Dense grid followed by golden-section refinement around the best sample.
fn grid_maximum(f: &impl Fn(f64) -> f64, n: usize) -> (f64, f64) {
    let step = 1.0 / (n - 1) as f64;
    let (mut best_i, mut best_v) = (0, f(0.0));
    for i in 1..n {
        let v = f(i as f64 * step);
        if v > best_v {
            best_i = i;
            best_v = v;
        }
    }
    let mut lo = (best_i as f64 - 1.0).max(0.0) * step;
    let mut hi = ((best_i + 1) as f64 * step).min(1.0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let m1 = hi - inv_phi * (hi - lo);
        let m2 = lo + inv_phi * (hi - lo);
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let t = 0.5 * (lo + hi);
    let v = f(t);
    if v > best_v {
        (v, t)
    } else {
        (best_v, best_i as f64 * step)
    }
}

/// Real roots of `c[0]x³ + c[1]x² + c[2]x + c[3]`, Newton-polished.
///
/// Returns `None` when the closed form is not trustworthy (non-finite output or a root
/// that does not polish), so the caller can fall back to sampling. An identically zero
/// polynomial has no isolated roots and yields an empty list.
fn real_cubic_roots(c: [f64; 4]) -> Option<Vec<f64>> {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Some(Vec::new());
    }
    let [a3, a2, a1, a0] = c.map(|v| v / scale);
    let small = 1e-12;

    let raw: Vec<f64> = if a3.abs() > small {
        depressed_cubic_roots(a2 / a3, a1 / a3, a0 / a3)
    } else if a2.abs() > small {
        let disc = a1 * a1 - 4.0 * a2 * a0;
        if disc < 0.0 {
            Vec::new()
        } else {
            // numerically stable quadratic formula
            let q = -0.5 * (a1 + a1.signum() * disc.sqrt());
            let mut r = vec![q / a2];
            if q != 0.0 {
                r.push(a0 / q);
            }
            r
        }
    } else if a1.abs() > small {
        vec![-a0 / a1]
    } else {
        Vec::new()
    };

    let poly = |x: f64| ((a3 * x + a2) * x + a1) * x + a0;
    let dpoly = |x: f64| (3.0 * a3 * x + 2.0 * a2) * x + a1;

    let mut roots = Vec::with_capacity(raw.len());
    for mut x in raw {
        if !x.is_finite() {
            return None;
        }
        for _ in 0..8 {
            let d = dpoly(x);
            if d == 0.0 {
                break;
            }
            let next = x - poly(x) / d;
            if !next.is_finite() {
                break;
            }
            x = next;
        }
        let mag = 1.0 + x.abs();
        if poly(x).abs() > 1e-9 * mag * mag * mag {
            return None;
        }
        roots.push(x);
    }
    Some(roots)
}

/// Real roots of the monic cubic `x³ + b x² + c x + d`.
fn depressed_cubic_roots(b: f64, c: f64, d: f64) -> Vec<f64> {
    use std::f64::consts::PI;
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if disc > 0.0 {
        let s = disc.sqrt();
        let t = (-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt();
        vec![t - shift]
    } else if p == 0.0 {
        vec![-shift]
    } else {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| r * (phi - 2.0 * PI * k as f64 / 3.0).cos() - shift)
            .collect()
    }
}
