//! Coupled-circuit model of a reconfigurable graphene Yagi-Uda cross.
//!
//! Ten same-length dipoles sit on two orthogonal arms, one driver per arm.
//! Biasing selects which parasitics act as director and reflector; the
//! array is solved with induced-EMF mutual impedances and a plasmonic
//! self-impedance surrogate, then radiated as short dipoles.

mod beam;
mod error;
mod evaluate;
pub mod export;
mod layout;
mod metrics;
mod model;
pub mod mutual;
mod pattern;
pub mod special;

pub use beam::{
    state_for_beam, BeamConfig, ChannelPotentials, Direction, ElementState, RoleSpacing,
};
pub use error::AntennaError;
pub use evaluate::{
    evaluate_beam, evaluate_state, residual_conductivity_sweep, Evaluation, OperatingPoint,
};
pub use layout::{AntennaLayout, Arm, Element, Geometry, Role};
pub use metrics::{pattern_metrics, PatternMetrics};
pub use model::{
    coupling, drive_vector, impedance_matrix, solve_array, solve_currents, AntennaModel,
    ArraySolution, ImpedanceMatrix,
};
pub use pattern::{check_step, far_field, RadiationPattern};
