use thiserror::Error;
use yagi_physics::PhysicsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AntennaError {
    #[error("invalid antenna configuration: {0}")]
    InvalidConfig(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("impedance matrix is singular (relative residual {0:e})")]
    SingularMatrix(f64),
    #[error("degenerate pattern: {0}")]
    DegeneratePattern(String),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
}
