use thiserror::Error;
use yagi_physics::PhysicsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RfError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("return loss undefined: Z_in = -Z_S")]
    Degenerate,
    #[error("no -10 dB band: |S11| at resonance is {0:.2} dB")]
    NoBand(f64),
    #[error("empty plan: first channel needs {needed:.3} V, range is {v_range:.3} V")]
    EmptyPlan { needed: f64, v_range: f64 },
    #[error(transparent)]
    Physics(#[from] PhysicsError),
}
