use thiserror::Error;

/// Broad failure class, used by front ends to pick an exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input: bad files, invalid correspondences, bad parameters.
    Input,
    /// A numerical routine failed or detected an internal inconsistency.
    Numeric,
    /// A configured size cap would be exceeded.
    Cap,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is identically zero")]
    IdenticallyZero,

    #[error("root finder did not converge (best residual {residual:.3e})")]
    NoConvergence { residual: f64 },

    #[error("component {index}: {source}")]
    Component {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("tree too large: {size} leaves exceeds cap {cap}")]
    TreeTooLarge { size: f64, cap: u64 },

    #[error("degree cap exceeded: composed degree {degree} > {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("interpolation is ill-conditioned (relative check error {estimate:.3e})")]
    Conditioning { estimate: f64 },

    #[error("state space of size {size} exceeds cap {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("measure is not invariant (defect {defect:.3e})")]
    NotInvariant { defect: f64 },

    #[error("internal inconsistency: {0}")]
    DeciderDisagreement(String),

    #[error("sampling failed after {retries} retries: {last}")]
    SamplingFailed { retries: usize, last: Box<Error> },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::TreeTooLarge { .. } | Error::DegreeCap { .. } | Error::SizeCap { .. } => {
                ErrorClass::Cap
            }
            Error::IdenticallyZero
            | Error::NoConvergence { .. }
            | Error::Conditioning { .. }
            | Error::NotInvariant { .. }
            | Error::DeciderDisagreement(_) => ErrorClass::Numeric,
            Error::Component { source, .. } => source.class(),
            Error::SamplingFailed { last, .. } => last.class(),
            Error::InvalidCorrespondence(_)
            | Error::InvalidMeasure(_)
            | Error::InvalidArgument(_)
            | Error::DimensionMismatch { .. }
            | Error::Parse { .. }
            | Error::Io(_) => ErrorClass::Input,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
