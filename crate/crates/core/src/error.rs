use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("register of {atoms} atoms exceeds the capacity of {max} atoms")]
    Capacity { atoms: usize, max: usize },

    #[error("norm {norm:e} is below the threshold {epsilon:e}")]
    ZeroNorm { norm: f64, epsilon: f64 },

    #[error("rate denominator |{detuning} - i*{dissipation}/2| is below 1e-12")]
    DegenerateDenominator { detuning: f64, dissipation: f64 },

    #[error("matrix exponential failed: {0}")]
    ConvergenceFailure(String),

    #[error("density matrix trace {trace} deviates from 1")]
    NotNormalized { trace: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
