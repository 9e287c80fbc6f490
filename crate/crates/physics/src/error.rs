use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("singular conductivity: |sigma| = {0:e} S is below the floor")]
    SingularConductivity(f64),
    #[error("no resonance in [{lo:e}, {hi:e}] Hz")]
    NoRoot { lo: f64, hi: f64 },
}
