use thiserror::Error;
use yagi_antenna::AntennaError;
use yagi_physics::PhysicsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControllerError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "LUT budget exceeded: {lines} lines ({bytes} B) against {max_lines} lines / {capacity} B"
    )]
    BudgetExceeded {
        lines: usize,
        bytes: usize,
        max_lines: usize,
        capacity: usize,
    },
    #[error("voltage out of range: {0}")]
    VoltageOutOfRange(String),
    #[error("unknown state: {0}")]
    UnknownState(String),
    #[error("invalid sel code 0b11 for element {element}")]
    InvalidCode { element: usize },
    #[error("malformed LUT image: {0}")]
    MalformedImage(String),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error(transparent)]
    Antenna(#[from] AntennaError),
}
