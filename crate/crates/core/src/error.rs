//! Error types shared across the library.

use thiserror::Error;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Coarse error class, used by frontends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad request: unknown ids, invalid parameters, missing configuration.
    Usage,
    /// Bad or inconsistent input data.
    Data,
    /// Numerically degenerate input (zero variance, duplicate points, ...).
    Numeric,
}

/// All errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input file (ragged rows, bad bytes, wrong payload size).
    #[error("format error: {0}")]
    Format(String),

    /// A parsed value is not a finite real (or not a valid integer label).
    #[error("value error: {0}")]
    Value(String),

    /// Dataset too small for the requested operation.
    #[error("dataset too small: {0}")]
    TooSmall(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Unknown metric, format, or other configuration name.
    #[error("config error: {0}")]
    Config(String),

    /// Invalid measure parameter (out of range for the dataset or schema).
    #[error("parameter error: {0}")]
    Param(String),

    /// A measure needs class labels but none were provided.
    #[error("missing labels: {0}")]
    MissingLabels(String),

    /// Paired matrices disagree on the number of points.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Unknown measure identifier.
    #[error("unknown measure id {id:?}; valid ids: {valid}")]
    NotFound { id: String, valid: String },

    /// A required preprocessing block is absent from the cache.
    #[error("missing preprocessing block: {0}")]
    MissingBlock(&'static str),

    /// Numerically degenerate input for a measure.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Geometry unsuitable for a visualization (e.g. collinear points).
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// Embedding has the wrong dimensionality for a visualization.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Visualization input is missing required fields.
    #[error("input error: {0}")]
    Input(String),

    /// An error raised while evaluating one entry of a specification.
    #[error("spec entry {index} ({id}): {source}")]
    Entry {
        index: usize,
        id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Tag an error with the spec entry it came from.
    pub fn at_entry(self, index: usize, id: &str) -> Error {
        Error::Entry {
            index,
            id: id.to_string(),
            source: Box::new(self),
        }
    }

    /// Classify for exit-code mapping.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_)
            | Error::Param(_)
            | Error::MissingLabels(_)
            | Error::NotFound { .. }
            | Error::MissingBlock(_) => ErrorClass::Usage,
            Error::Format(_)
            | Error::Value(_)
            | Error::TooSmall(_)
            | Error::Io(_)
            | Error::Shape(_)
            | Error::Dimension(_)
            | Error::Input(_) => ErrorClass::Data,
            Error::DegenerateInput(_) | Error::DegenerateGeometry(_) => ErrorClass::Numeric,
            Error::Entry { source, .. } => source.class(),
        }
    }

    /// Stable machine-readable kind string.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Format(_) => "format",
            Error::Value(_) => "value",
            Error::TooSmall(_) => "too_small",
            Error::Io(_) => "io",
            Error::Config(_) => "config",
            Error::Param(_) => "param",
            Error::MissingLabels(_) => "missing_labels",
            Error::Shape(_) => "shape",
            Error::NotFound { .. } => "not_found",
            Error::MissingBlock(_) => "missing_block",
            Error::DegenerateInput(_) => "degenerate_input",
            Error::DegenerateGeometry(_) => "degenerate_geometry",
            Error::Dimension(_) => "dimension",
            Error::Input(_) => "input",
            Error::Entry { source, .. } => source.kind(),
        }
    }
}
