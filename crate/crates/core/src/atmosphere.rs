use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Top of the troposphere layer the model covers (m).
pub const TROPOPAUSE: f64 = 11_000.0;

/// ISA troposphere: linear temperature lapse, hydrostatic density profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtmosphereModel {
    /// Sea-level density, kg/m³.
    pub rho0: f64,
    /// Sea-level temperature, K.
    pub t0: f64,
    /// Temperature lapse rate, K/m.
    pub lapse_rate: f64,
    /// Gravitational acceleration, m/s². Also used by the vehicle dynamics.
    pub g0: f64,
    /// Specific gas constant of dry air, J/(kg·K).
    pub gas_constant: f64,
}

impl Default for AtmosphereModel {
    fn default() -> Self {
        Self {
            rho0: 1.225,
            t0: 288.15,
            lapse_rate: 0.0065,
            g0: 9.80665,
            gas_constant: 287.05,
        }
    }
}

impl AtmosphereModel {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rho0", self.rho0),
            ("t0", self.t0),
            ("lapse_rate", self.lapse_rate),
            ("g0", self.g0),
            ("gas_constant", self.gas_constant),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(invalid(format!("atmosphere {name} must be positive, got {value}")));
            }
        }
        Ok(())
    }

    fn check_altitude(altitude: f64) -> Result<()> {
        if (0.0..TROPOPAUSE).contains(&altitude) {
            Ok(())
        } else {
            Err(invalid(format!(
                "altitude {altitude} m outside the modelled range [0, {TROPOPAUSE})"
            )))
        }
    }

    /// Air density (kg/m³) at `altitude` metres.
    pub fn density(&self, altitude: f64) -> Result<f64> {
        Self::check_altitude(altitude)?;
        Ok(self.density_unchecked(altitude))
    }

    /// `F_max(H) / F_max(0)`: rotor thrust scales with the cube root of the density ratio.
    pub fn thrust_scale(&self, altitude: f64) -> Result<f64> {
        Self::check_altitude(altitude)?;
        Ok(self.thrust_scale_unchecked(altitude))
    }

    pub(crate) fn density_unchecked(&self, altitude: f64) -> f64 {
        let exponent = self.g0 / (self.gas_constant * self.lapse_rate) - 1.0;
        self.rho0 * (1.0 - self.lapse_rate * altitude / self.t0).powf(exponent)
    }

    pub(crate) fn thrust_scale_unchecked(&self, altitude: f64) -> f64 {
        (self.density_unchecked(altitude) / self.rho0).cbrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent route: ρ = p / (R·T) with the barometric pressure law.
    fn density_via_pressure(m: &AtmosphereModel, h: f64) -> f64 {
        let p0 = m.rho0 * m.gas_constant * m.t0;
        let t = m.t0 - m.lapse_rate * h;
        let p = p0 * (t / m.t0).powf(m.g0 / (m.gas_constant * m.lapse_rate));
        p / (m.gas_constant * t)
    }

    #[test]
    fn density_anchor_values() {
        let m = AtmosphereModel::default();
        assert_eq!(m.density(0.0).unwrap(), 1.225);
        assert_relative_eq!(m.density(1000.0).unwrap(), 1.1117, max_relative = 1e-4);
        assert_relative_eq!(m.density(3000.0).unwrap(), 0.9091, max_relative = 1e-4);
        for h in [0.0, 500.0, 1000.0, 2500.0, 3000.0, 10_999.0] {
            assert_relative_eq!(
                m.density(h).unwrap(),
                density_via_pressure(&m, h),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn thrust_scale_anchor_values() {
        let m = AtmosphereModel::default();
        assert_eq!(m.thrust_scale(0.0).unwrap(), 1.0);
        let s = m.thrust_scale(3000.0).unwrap();
        assert_relative_eq!(s, 0.9054, max_relative = 1e-4);
        assert_relative_eq!(42.0 * s, 38.0, max_relative = 2e-3);
        assert!(m.thrust_scale(2000.0).unwrap() > s);
    }

    #[test]
    fn strictly_decreasing_on_operating_band() {
        let m = AtmosphereModel::default();
        let mut prev = (m.density(0.0).unwrap(), m.thrust_scale(0.0).unwrap());
        for h in 1..=3000 {
            let cur = (m.density(h as f64).unwrap(), m.thrust_scale(h as f64).unwrap());
            assert!(cur.0 < prev.0 && cur.1 < prev.1, "not decreasing at {h} m");
            let s = cur.1;
            assert_relative_eq!(s * s * s * m.rho0, cur.0, max_relative = 1e-12);
            prev = cur;
        }
    }

    #[test]
    fn out_of_range_altitudes_rejected() {
        let m = AtmosphereModel::default();
        assert!(m.density(-1.0).is_err());
        assert!(m.density(TROPOPAUSE).is_err());
        assert!(m.thrust_scale(f64::NAN).is_err());
    }
}
