use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A function argument is outside its domain (non half-integer quantum
    /// number, bad grid, step size too large, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A physical parameter violates its invariant.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A linear solve failed or was too ill-conditioned to trust.
    #[error("solver failure: {reason} (condition estimate {condition:.3e}; {context})")]
    Solver {
        reason: String,
        condition: f64,
        context: String,
    },

    /// The time-domain integrator produced a non-finite state.
    #[error("integration failure: {0}")]
    Integration(String),

    /// A scan point failed; `axis` names the scanned quantity.
    #[error("{axis} = {value}: {source}")]
    AtPoint {
        axis: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, axis: &'static str, value: f64) -> Self {
        Error::AtPoint {
            axis,
            value,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
