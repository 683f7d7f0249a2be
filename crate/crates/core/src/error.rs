use thiserror::Error;

/// Errors shared by all modules of the calculator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    /// A run-length word with a non-positive run, or runs that do not add up.
    #[error("malformed word: {0}")]
    MalformedWord(String),

    /// Composition of words over different cuspidal data.
    #[error("incompatible base data: {0} vs {1}")]
    IncompatibleBase(String, String),

    /// A product or decomposition outside the consecutive / multiplicity-free
    /// support range the calculus covers.
    #[error("unsupported support: {0}")]
    UnsupportedSupport(String),

    /// A signature that is not a uniform-multiplicity union of extension sets.
    #[error("inconsistent signature: {0}")]
    InconsistentSignature(String),

    /// A twist whose exponent is not a half-integer.
    #[error("malformed twist: {0}")]
    MalformedTwist(String),

    /// Parameter outside the declared domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Bad parameters on the command-line surface.
    #[error("usage error: {0}")]
    Usage(String),

    /// Parse failure for the canonical textual forms.
    #[error("parse error: {0}")]
    Parse(String),
}
