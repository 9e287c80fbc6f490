//! Electromagnetic material model for gated graphene sheets.
//!
//! Intraband Kubo conductivity, multilayer scaling, surface impedance,
//! electrostatic gating and a quasi-static plasmon dispersion used to place
//! dipole resonances.
//!
//! Chemical potentials are taken in eV everywhere and converted to joules
//! internally.

mod conductivity;
mod constants;
mod error;
mod gating;
mod plasmon;
mod sheet;

pub use conductivity::{
    drude_weight, kubo_conductivity, layer_conductivity, ln_2cosh, surface_impedance,
    DrudeResponse, SINGULAR_FLOOR,
};
pub use constants::{PhysicalConstants, C0};
pub use error::PhysicsError;
pub use gating::{chemical_potential_from_voltage, gate_voltage};
pub use plasmon::{
    plasmon_wavevector, plasmon_wavevector_for, resonance_frequency, ResonanceMode, ResonanceModel,
    SEARCH_BAND,
};
pub use sheet::{BiasStack, ComplexSurfaceQuantity, GrapheneSheet, MAX_LAYERS};

pub type Result<T> = std::result::Result<T, PhysicsError>;
