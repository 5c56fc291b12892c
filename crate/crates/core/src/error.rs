use thiserror::Error;

/// Errors raised by the analytic formulas, the simulator and the sweep harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate case: {0}")]
    Degenerate(String),
    #[error("outside regime: {0}")]
    Regime(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("codeword violates the equal-energy constraint: Tr(SSᴴ)/(ML) = {0}")]
    EnergyConstraint(f64),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
