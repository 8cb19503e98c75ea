use thiserror::Error;

use crate::congruence::CongruenceError;
use crate::construction::ConstructionError;
use crate::lattice::LatticeError;
use crate::order::OrderError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Crate-level error, grouping the per-module failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    /// True when the failure is attributable to user input rather than to
    /// a construction or engine defect.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Order(_) | Error::Input(_) => true,
            Error::Lattice(LatticeError::UnknownElement(_)) => true,
            Error::Construction(e) => e.is_input_error(),
            _ => false,
        }
    }
}
