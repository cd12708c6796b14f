use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("cubic roots nearly degenerate (min gap {min_root_gap:.3e}); three-exponential form is unreliable")]
    NearDegenerateRoots { min_root_gap: f64 },

    #[error("survival amplitude vanishes at t = {t} (|C1| = {magnitude:.3e}); rates diverge")]
    AmplitudeZero { t: f64, magnitude: f64 },

    #[error("no evolution over the horizon (path integral {path_integral:.3e})")]
    NoEvolution { path_integral: f64 },

    #[error("quadrature failed to converge on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64 },

    #[error("finite-cavity kernel requires a finite transit time")]
    InfiniteTransitTime,

    #[error("corrector iteration diverged at step {step}; reduce the step size")]
    StepTooLarge { step: usize },

    #[error("no transition inside bracket [{lo}, {hi}]: {reason}")]
    BracketInvalid { lo: f64, hi: f64, reason: String },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
