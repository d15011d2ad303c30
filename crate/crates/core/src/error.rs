use std::fmt;

/// Errors produced by configuration validation and the simulation/analysis
/// operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter or noise specification failed validation.
    Config(String),
    /// An input value is outside the domain of the operation.
    Domain(String),
    /// A phase series violated the positive-frequency assumption of the
    /// baseband divider model.
    DecreasingPhase { index: usize },
    /// A closed-loop run failed to acquire or hold lock where the caller
    /// required it (two-slave experiment).
    NotLocked { which: String },
    /// A non-finite value entered a stepping operation.
    NonFinite(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::DecreasingPhase { index } => write!(
                f,
                "phase decreases at sample {index}: negative instantaneous frequency \
                 is unphysical for the baseband divider model"
            ),
            Error::NotLocked { which } => write!(f, "loop '{which}' failed to lock"),
            Error::NonFinite(msg) => write!(f, "non-finite input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
