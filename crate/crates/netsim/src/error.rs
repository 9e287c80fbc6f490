use thiserror::Error;
use yagi_antenna::AntennaError;
use yagi_controller::ControllerError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetsimError {
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error("no viable channel: best SNR {best_snr_db:.2} dB at an estimated {distance:.4} m")]
    NoViableChannel { best_snr_db: f64, distance: f64 },
    #[error(transparent)]
    Antenna(#[from] AntennaError),
    #[error(transparent)]
    Controller(#[from] ControllerError),
}

pub(crate) fn config(msg: impl Into<String>) -> NetsimError {
    NetsimError::Config(msg.into())
}
