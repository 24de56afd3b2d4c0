use thiserror::Error;

/// Errors raised by constructions in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A document that is not well-formed JSON of the expected shape.
    #[error("parse error: {0}")]
    Parse(String),
    /// Two maps or tables whose sizes do not line up were composed.
    #[error("composition error: {0}")]
    Compose(String),
    /// Signatures, slices or algebras over different colour sets were combined.
    #[error("colour mismatch: {0}")]
    ColourMismatch(String),
    /// Malformed input data (out-of-range indices, unknown names, bad typing).
    #[error("invalid input: {0}")]
    Input(String),
    /// A structure failed its defining laws (algebra, category, functor, ...).
    #[error("validation failed: {0}")]
    Validation(String),
    /// A map induced on representatives of a quotient depends on the choice.
    #[error("not well defined on classes: {0}")]
    IllDefined(String),
    /// A construction needed data beyond the declared truncation.
    #[error("truncation overflow: {0}")]
    Truncation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
