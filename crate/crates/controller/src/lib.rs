//! Antenna controller: two look-up tables and a DAC.
//!
//! A (channel, beam) directive selects one bias line holding three DAC
//! codes and one sel word assigning a code level to every element. The DAC
//! turns codes into gate voltages, which set each element's chemical
//! potential.

mod actuate;
mod dac;
mod error;
mod lut;

pub use actuate::{
    quantization_report, ActuationResult, AntennaState, Controller, QuantizationReport, Timing,
};
pub use dac::DacConfig;
pub use error::ControllerError;
pub use lut::{
    compile_luts, decode_sel, encode_sel, potentials_for_plan, BiasLevels, BiasLut, Level,
    LutBudget, Luts, SelLut, LINE_BYTES, MAX_ELEMENTS,
};
