use serde::{Deserialize, Serialize};
use yagi_antenna::{BeamConfig, ElementState};
use yagi_physics::{
    chemical_potential_from_voltage, gate_voltage, kubo_conductivity, BiasStack, GrapheneSheet,
    PhysicalConstants,
};

use crate::{decode_sel, ControllerError, DacConfig, Luts};

/// Channel index and beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AntennaState {
    pub channel: usize,
    pub beam: BeamConfig,
}

/// Fixed latency components besides DAC settling (s).
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Timing {
    pub lut_read: f64,
    pub graphene_response: f64,
}

impl Default for Timing {
    fn default() -> Self {
        Self {
            lut_read: 1e-9,
            graphene_response: 0.5e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActuationResult {
    /// Gate voltage per element (V).
    pub voltages: Vec<f64>,
    /// Chemical potential reached per element (eV).
    pub e_f: Vec<f64>,
    /// Time from directive to settled antenna (s).
    pub latency: f64,
}

impl ActuationResult {
    pub fn element_state(&self) -> ElementState {
        ElementState {
            e_f: self.e_f.clone(),
        }
    }
}

/// One antenna's controller. Holds the tables and the last applied state.
#[derive(Debug, Clone)]
pub struct Controller {
    pub luts: Luts,
    pub dac: DacConfig,
    pub stack: BiasStack,
    pub constants: PhysicalConstants,
    pub timing: Timing,
    current: Option<AntennaState>,
}

impl Controller {
    pub fn new(
        luts: Luts,
        dac: DacConfig,
        stack: BiasStack,
        constants: PhysicalConstants,
        timing: Timing,
    ) -> Result<Self, ControllerError> {
        dac.validate()?;
        stack.validate()?;
        for (name, v) in [
            ("lut_read", timing.lut_read),
            ("graphene_response", timing.graphene_response),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ControllerError::InvalidParameter(format!(
                    "{name} must be >= 0, got {v}"
                )));
            }
        }
        Ok(Self {
            luts,
            dac,
            stack,
            constants,
            timing,
            current: None,
        })
    }

    pub fn current(&self) -> Option<AntennaState> {
        self.current
    }

    /// LUT read, DAC settling and graphene response, in sequence.
    pub fn latency(&self) -> f64 {
        self.timing.lut_read + self.dac.settle_time + self.timing.graphene_response
    }

    /// Voltages and chemical potentials for `target`, without applying it.
    pub fn resolve(&self, target: AntennaState) -> Result<ActuationResult, ControllerError> {
        let bias = self.luts.bias.entries.get(target.channel).ok_or_else(|| {
            ControllerError::UnknownState(format!("channel {} not in the bias LUT", target.channel))
        })?;
        let word = self.luts.sel.word(target.beam).ok_or_else(|| {
            ControllerError::UnknownState(format!("beam {} not in the sel LUT", target.beam))
        })?;
        let levels = decode_sel(word, self.luts.n_elements)?;
        let voltages: Vec<f64> = levels
            .iter()
            .map(|&l| self.dac.voltage(bias.code(l)))
            .collect();
        let e_f = voltages
            .iter()
            .map(|&v| chemical_potential_from_voltage(v, &self.stack, &self.constants))
            .collect::<Result<_, _>>()?;
        Ok(ActuationResult {
            voltages,
            e_f,
            latency: self.latency(),
        })
    }

    pub fn set_state(&mut self, target: AntennaState) -> Result<ActuationResult, ControllerError> {
        let r = self.resolve(target)?;
        self.current = Some(target);
        Ok(r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizationReport {
    /// Chemical potential reached per element (eV).
    pub achieved: Vec<f64>,
    /// Achieved minus target (eV).
    pub error: Vec<f64>,
    /// |sigma| of an element at code 0 over |sigma| of the driver.
    pub rho: f64,
}

/// Quantizes each target chemical potential through `dac` (`None` is an
/// ideal DAC) and reports the errors and the residual conductivity
/// fraction at `f`. `driver` indexes `targets`.
pub fn quantization_report(
    targets: &[f64],
    driver: usize,
    dac: Option<&DacConfig>,
    stack: &BiasStack,
    sheet: &GrapheneSheet,
    f: f64,
    c: &PhysicalConstants,
) -> Result<QuantizationReport, ControllerError> {
    if driver >= targets.len() {
        return Err(ControllerError::InvalidParameter(format!(
            "driver index {driver} outside {} targets",
            targets.len()
        )));
    }
    let quantize = |e: f64| -> Result<f64, ControllerError> {
        match dac {
            None => {
                gate_voltage(e, stack, c)?;
                Ok(e)
            }
            Some(d) => {
                let code = d.nearest_code(gate_voltage(e, stack, c)?)?;
                Ok(chemical_potential_from_voltage(d.voltage(code), stack, c)?)
            }
        }
    };
    let achieved: Vec<f64> = targets
        .iter()
        .map(|&e| quantize(e))
        .collect::<Result<_, _>>()?;
    let error = achieved.iter().zip(targets).map(|(a, t)| a - t).collect();
    // code 0 drives 0 V with or without quantization
    let off = chemical_potential_from_voltage(0.0, stack, c)?;
    let s_off = kubo_conductivity(&sheet.with_e_f(off), f, c)?.value.norm();
    let s_drv = kubo_conductivity(&sheet.with_e_f(achieved[driver]), f, c)?
        .value
        .norm();
    Ok(QuantizationReport {
        achieved,
        error,
        rho: s_off / s_drv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_dac_is_exact() {
        let c = PhysicalConstants::default();
        let r = quantization_report(
            &[0.5, 0.0, 0.8, 0.8, 0.0],
            0,
            None,
            &BiasStack::default(),
            &GrapheneSheet::default(),
            2.3e12,
            &c,
        )
        .unwrap();
        assert!(r.error.iter().all(|&e| e == 0.0));
        assert!(r.rho > 0.0 && r.rho < 0.2);
    }
}
