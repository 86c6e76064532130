use thiserror::Error;

/// Everything that can go wrong in the geometric pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coordinate {index} is not a free direction of the slice")]
    NotFreeDirection { index: usize },

    #[error("{what} out of range: {value} (allowed {min}..={max})")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: i64, found: i64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no limit point found within the grid budget (best tail gap {gap})")]
    NoLimitFound { gap: f64 },

    #[error("no sampled offset satisfies the wall bound: best {best} > bound {bound}")]
    AveragingFailed { best: f64, bound: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("P(1,0) requires A∩W to be empty, found {count} simplices")]
    PreconditionP10 { count: usize },

    #[error("node {path}: {source}")]
    AtNode { path: String, source: Box<Error> },

    #[error("flat disk does not fit: apex too close to the ball boundary (clearance {clearance})")]
    NeedCurvedDisk { clearance: f64 },

    #[error("integration blow-up: vertex left the ball by {excess}")]
    IntegrationBlowup { excess: f64 },

    #[error("flow hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("incompatible flow stages: {0}")]
    Incompatible(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotFreeDirection { .. } => "NotFreeDirection",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::EmptyInput(_) => "EmptyInput",
            Error::InvalidGeometry(_) => "InvalidGeometry",
            Error::Unsupported(_) => "Unsupported",
            Error::NoLimitFound { .. } => "NoLimitFound",
            Error::AveragingFailed { .. } => "AveragingFailed",
            Error::Precondition(_) => "Precondition",
            Error::PreconditionP10 { .. } => "PreconditionP10",
            Error::AtNode { source, .. } => source.kind(),
            Error::NeedCurvedDisk { .. } => "NeedCurvedDisk",
            Error::IntegrationBlowup { .. } => "IntegrationBlowup",
            Error::Hypothesis(_) => "Hypothesis",
            Error::Incompatible(_) => "Incompatible",
            Error::Parse(_) => "Parse",
        }
    }

    pub(crate) fn at(self, path: &str) -> Error {
        match self {
            e @ Error::AtNode { .. } => e,
            e => Error::AtNode {
                path: path.to_string(),
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
