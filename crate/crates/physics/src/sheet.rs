use num_complex::Complex64;
use serde::Deserialize;

use crate::{PhysicsError, Result};

/// Layer counts at or above this value fall outside the N*sigma rule.
pub const MAX_LAYERS: u32 = 6;

/// A graphene sheet at a given bias and temperature.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrapheneSheet {
    /// Chemical potential (eV).
    pub e_f: f64,
    /// Relaxation time (s).
    pub tau: f64,
    /// Temperature (K).
    pub temperature: f64,
    /// Number of stacked layers.
    pub layers: u32,
}

impl Default for GrapheneSheet {
    fn default() -> Self {
        Self {
            e_f: 0.5,
            tau: 0.5e-12,
            temperature: 300.0,
            layers: 1,
        }
    }
}

impl GrapheneSheet {
    pub fn new(e_f: f64, tau: f64, temperature: f64, layers: u32) -> Result<Self> {
        let s = Self {
            e_f,
            tau,
            temperature,
            layers,
        };
        s.validate()?;
        Ok(s)
    }

    /// Same sheet biased to a different chemical potential.
    pub fn with_e_f(self, e_f: f64) -> Self {
        Self { e_f, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_f.is_finite() && self.e_f >= 0.0) {
            return Err(invalid(format!("E_F must be >= 0 eV, got {}", self.e_f)));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(invalid(format!("tau must be > 0, got {}", self.tau)));
        }
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(invalid(format!(
                "temperature must be > 0 K, got {}",
                self.temperature
            )));
        }
        if self.layers < 1 || self.layers >= MAX_LAYERS {
            return Err(invalid(format!(
                "layer count must be in 1..{MAX_LAYERS}, got {}",
                self.layers
            )));
        }
        Ok(())
    }
}

/// Dielectric spacer between the sheet and its gate electrode.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BiasStack {
    /// Spacer thickness (m).
    pub thickness: f64,
    /// Spacer relative permittivity.
    pub eps_r: f64,
}

impl Default for BiasStack {
    fn default() -> Self {
        Self {
            thickness: 100e-9,
            eps_r: 9.3,
        }
    }
}

impl BiasStack {
    pub fn validate(&self) -> Result<()> {
        if !(self.thickness.is_finite() && self.thickness > 0.0) {
            return Err(invalid(format!(
                "spacer thickness must be > 0, got {}",
                self.thickness
            )));
        }
        if !(self.eps_r.is_finite() && self.eps_r > 1.0) {
            return Err(invalid(format!(
                "spacer eps_r must be > 1, got {}",
                self.eps_r
            )));
        }
        Ok(())
    }
}

/// Complex sheet quantity tagged with the frequency it was evaluated at.
/// Siemens for conductivity, ohms for impedance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexSurfaceQuantity {
    pub value: Complex64,
    pub frequency: f64,
}

pub(crate) fn invalid(msg: String) -> PhysicsError {
    PhysicsError::InvalidParameter(msg)
}
