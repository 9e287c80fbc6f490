use thiserror::Error;
use yagi_antenna::AntennaError;
use yagi_controller::ControllerError;
use yagi_netsim::NetsimError;
use yagi_physics::PhysicsError;
use yagi_rf::RfError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<PhysicsError> for CliError {
    fn from(e: PhysicsError) -> Self {
        match e {
            PhysicsError::InvalidParameter(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<AntennaError> for CliError {
    fn from(e: AntennaError) -> Self {
        match e {
            AntennaError::InvalidConfig(_) => CliError::Config(e.to_string()),
            AntennaError::Physics(p) => p.into(),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<RfError> for CliError {
    fn from(e: RfError) -> Self {
        match e {
            RfError::InvalidParameter(_) | RfError::EmptyPlan { .. } => {
                CliError::Config(e.to_string())
            }
            RfError::Physics(p) => p.into(),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<ControllerError> for CliError {
    fn from(e: ControllerError) -> Self {
        match e {
            ControllerError::Physics(p) => p.into(),
            ControllerError::Antenna(a) => a.into(),
            ControllerError::InvalidCode { .. } | ControllerError::MalformedImage(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<NetsimError> for CliError {
    fn from(e: NetsimError) -> Self {
        match e {
            NetsimError::Config(_) => CliError::Config(e.to_string()),
            NetsimError::Antenna(a) => a.into(),
            NetsimError::Controller(c) => c.into(),
            NetsimError::NoViableChannel { .. } => CliError::Numerical(e.to_string()),
        }
    }
}
