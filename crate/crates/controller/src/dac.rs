use serde::Deserialize;
use yagi_antenna::ChannelPotentials;
use yagi_physics::{gate_voltage, BiasStack, PhysicalConstants};

use crate::ControllerError;

/// Uniform DAC: code n drives n v_max / (2^bits - 1).
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DacConfig {
    pub bits: u32,
    /// Full-scale voltage (V).
    pub v_max: f64,
    /// Output settling time (s).
    #[serde(default = "default_settle")]
    pub settle_time: f64,
}

fn default_settle() -> f64 {
    1e-9
}

impl DacConfig {
    /// Codes are stored in 8-bit LUT fields.
    pub const MAX_BITS: u32 = 8;

    pub fn new(bits: u32, v_max: f64) -> Result<Self, ControllerError> {
        let d = Self {
            bits,
            v_max,
            settle_time: default_settle(),
        };
        d.validate()?;
        Ok(d)
    }

    /// `bits`-bit DAC whose full scale is the highest parasitic gate
    /// voltage in `potentials`, rounded up to a whole volt.
    pub fn fit(
        bits: u32,
        potentials: &[ChannelPotentials],
        stack: &BiasStack,
        c: &PhysicalConstants,
    ) -> Result<Self, ControllerError> {
        let mut top: f64 = 0.0;
        for p in potentials {
            top = top.max(gate_voltage(p.parasitic, stack, c)?);
        }
        Self::new(bits, top.ceil().max(1.0))
    }

    pub fn validate(&self) -> Result<(), ControllerError> {
        if !(1..=Self::MAX_BITS).contains(&self.bits) {
            return Err(ControllerError::InvalidParameter(format!(
                "DAC bits must be in 1..={}, got {}",
                Self::MAX_BITS,
                self.bits
            )));
        }
        if !(self.v_max.is_finite() && self.v_max > 0.0) {
            return Err(ControllerError::InvalidParameter(format!(
                "v_max must be > 0, got {}",
                self.v_max
            )));
        }
        if !(self.settle_time.is_finite() && self.settle_time >= 0.0) {
            return Err(ControllerError::InvalidParameter(format!(
                "settle_time must be >= 0, got {}",
                self.settle_time
            )));
        }
        Ok(())
    }

    pub fn max_code(&self) -> u8 {
        ((1u32 << self.bits) - 1) as u8
    }

    pub fn lsb(&self) -> f64 {
        self.v_max / f64::from(self.max_code())
    }

    pub fn voltage(&self, code: u8) -> f64 {
        f64::from(code.min(self.max_code())) * self.lsb()
    }

    /// Nearest code, ties rounding up.
    pub fn nearest_code(&self, v: f64) -> Result<u8, ControllerError> {
        if !(v >= 0.0 && v <= self.v_max) {
            return Err(ControllerError::VoltageOutOfRange(format!(
                "{v} V is outside [0, {}] V",
                self.v_max
            )));
        }
        Ok(((v / self.lsb() + 0.5).floor() as u8).min(self.max_code()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_bit_scale() {
        let d = DacConfig::new(4, 92.0).unwrap();
        assert_eq!(d.max_code(), 15);
        assert_eq!(d.voltage(15), 92.0);
        assert_eq!(d.voltage(0), 0.0);
        assert_eq!(d.nearest_code(35.74).unwrap(), 6);
        // half-LSB ties go up
        assert_eq!(d.nearest_code(0.5 * d.lsb()).unwrap(), 1);
        assert!(d.nearest_code(92.5).is_err());
    }

    #[test]
    fn monotone() {
        for bits in 1..=8 {
            let d = DacConfig::new(bits, 10.0).unwrap();
            for n in 0..d.max_code() {
                assert!(d.voltage(n) < d.voltage(n + 1));
            }
        }
    }

    #[test]
    fn bad_configs() {
        assert!(DacConfig::new(0, 1.0).is_err());
        assert!(DacConfig::new(9, 1.0).is_err());
        assert!(DacConfig::new(4, 0.0).is_err());
    }

    #[test]
    fn fit_rounds_up() {
        let c = PhysicalConstants::default();
        let d = DacConfig::fit(
            4,
            &[ChannelPotentials::REFERENCE],
            &BiasStack::default(),
            &c,
        )
        .unwrap();
        assert_eq!(d.v_max, 92.0);
    }
}
