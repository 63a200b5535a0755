//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by dataset handling, schedules, the denoiser, and metrics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty dataset")]
    EmptyDataset,

    #[error("zero variance channel {channel}")]
    ZeroVarianceChannel { channel: char },

    #[error("normalization stats already applied")]
    StatsAlreadyApplied,

    #[error("normalization stats not applied")]
    StatsNotApplied,

    #[error("shape mismatch for {what}: expected {expected}, got {actual}")]
    ShapeMismatch {
        what: &'static str,
        expected: String,
        actual: String,
    },

    #[error("invalid skeleton: {0}")]
    InvalidSkeleton(String),

    #[error("label {id} out of range [0, {classes})")]
    LabelOutOfRange { id: usize, classes: usize },

    #[error("time step {t} out of range [{min}, {max}]")]
    TimeStepOutOfRange { t: usize, min: usize, max: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("missing forward cache: run a cached forward pass before backward")]
    MissingCache,

    #[error("unconditional prediction is not supported by this model")]
    NullLabelUnsupported,

    #[error("bad magic bytes: expected {expected:?}")]
    BadMagic { expected: &'static str },

    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),

    #[error("unexpected end of file")]
    UnexpectedEof,

    #[error("corrupt file: {0}")]
    CorruptFile(String),

    #[error("class {class} has fewer than 2 samples")]
    ClassTooSmall { class: usize },

    #[error("too few samples: need at least {need}, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("covariance not positive semi-definite: eigenvalue {0}")]
    NotPsd(f64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Maps `io::ErrorKind::UnexpectedEof` onto the dedicated variant so file
    /// readers report truncation uniformly.
    pub(crate) fn from_read(err: std::io::Error) -> Self {
        if err.kind() == std::io::ErrorKind::UnexpectedEof {
            Error::UnexpectedEof
        } else {
            Error::Io(err)
        }
    }
}
