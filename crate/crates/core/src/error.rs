use thiserror::Error;

/// Errors produced by the simulator, optimizer and experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// A model or run configuration is unusable (qubit count, optimizer knobs).
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called with inconsistent arguments.
    #[error("argument error: {0}")]
    Argument(String),

    /// Anisotropies do not match the requested model preset.
    #[error("validation error: {0}")]
    Validation(String),

    /// Efficiency is undefined for a battery with no extractable work.
    #[error("efficiency undefined: ergotropy {0:e} is not positive")]
    DegenerateBattery(f64),

    /// The eigensolver failed to converge.
    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations (off-diagonal residual {residual:e})")]
    EigenNoConvergence {
        index: usize,
        iterations: usize,
        residual: f64,
    },

    /// A non-finite work value or gradient showed up during ascent.
    /// `work_history` holds every recorded work value up to the failure.
    #[error("non-finite value at iteration {iteration} (theta = {theta:?})")]
    NonFinite {
        iteration: usize,
        theta: Vec<f64>,
        work_history: Vec<f64>,
    },

    /// Any other numerical failure.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// One trial of an ensemble failed; the whole ensemble is aborted.
    #[error("trial {index} (seed {seed}, point {point}) failed: {source}")]
    Trial {
        index: usize,
        seed: u64,
        point: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors caused by bad user input rather than numerics.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::Config(_) | Error::Argument(_) | Error::Validation(_) => true,
            Error::Trial { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
