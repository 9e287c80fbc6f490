use serde::Deserialize;

/// Speed of light in vacuum (m/s).
pub const C0: f64 = 299_792_458.0;

/// Physical constants used by the material model.
///
/// `Default` gives CODATA 2018 values and a Fermi velocity of 1e6 m/s.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalConstants {
    /// Elementary charge (C).
    pub e: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Vacuum permittivity (F/m).
    pub eps0: f64,
    /// Fermi velocity (m/s).
    pub v_f: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            e: 1.602_176_634e-19,
            hbar: 1.054_571_817e-34,
            k_b: 1.380_649e-23,
            eps0: 8.854_187_812_8e-12,
            v_f: 1.0e6,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [
            ("e", self.e),
            ("hbar", self.hbar),
            ("k_b", self.k_b),
            ("eps0", self.eps0),
            ("v_f", self.v_f),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(crate::PhysicsError::InvalidParameter(format!(
                    "constant {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Converts electron-volts to joules.
    pub fn ev_to_joule(&self, ev: f64) -> f64 {
        ev * self.e
    }

    /// Thermal energy k_B T in eV.
    pub fn thermal_ev(&self, temperature: f64) -> f64 {
        self.k_b * temperature / self.e
    }
}
