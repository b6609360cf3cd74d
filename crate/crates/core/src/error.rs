use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("signal has fewer than two maxima or two minima; no IMF can be extracted")]
    MonotonicSignal,
    #[error("series too short: {len} samples, need at least {min}")]
    TooShort { len: usize, min: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("input contains a non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("population is empty")]
    EmptyPopulation,
    #[error("archive is empty")]
    EmptyArchive,
    #[error("point set is empty")]
    EmptySet,
    #[error("decision vector component {index} lies outside the unit box")]
    OutOfBox { index: usize },
    #[error("training set has no observations")]
    DegenerateData,
    #[error("model has no output weights; train it first")]
    Untrained,
    #[error("actual value at index {index} is zero")]
    ZeroActual { index: usize },
    #[error("denominator of {0} is zero")]
    DegenerateDenominator(&'static str),
    #[error("series has zero variance")]
    DegenerateVariance,
    #[error("loss differential has zero variance; the DM test is undefined")]
    ZeroVariance,
    #[error("baseline value of {0} is zero")]
    ZeroBaseline(&'static str),
    #[error("malformed model file: {0}")]
    ModelFormat(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
