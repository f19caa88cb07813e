use thiserror::Error;

/// Errors raised by model construction, criteria and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// An infinite family whose strip masses have no closed form.
    #[error("unsupported tail: {0}")]
    UnsupportedTail(String),

    #[error("unstable spectrum: eigenvalue at index {index} has real part {real} >= 0")]
    UnstableSpectrum { index: i64, real: f64 },

    #[error("wrong system kind: expected {expected}, found {found}")]
    WrongSystemKind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("wrong criterion branch for p = {p}, q = {q}: {hint}")]
    WrongBranch { p: f64, q: f64, hint: &'static str },

    /// The control operator lies in no X_{-beta} with beta < 1.
    #[error("coefficients belong to no fractional space X_(-beta), beta < 1")]
    NoMembership,

    #[error("{name} = {value} is out of range: {allowed}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        allowed: &'static str,
    },

    #[error("Laplace transform evaluated at its pole z = {re} + {im}i")]
    PoleAtEvaluation { re: f64, im: f64 },

    /// The measure integral of |Lu|^q is infinite: itself evidence of unboundedness.
    #[error("embedding integral diverges: {0}")]
    EmbeddingIntegralDiverges(String),

    #[error("integral diverges: {0}")]
    IntegralDiverges(String),

    /// Truncation error of the simulated state exceeds the certification threshold.
    #[error("tail not certified: error bound {bound:e} against partial value {partial:e}")]
    TailNotCertified { bound: f64, partial: f64 },

    #[error("columns do not share one eigenvalue family")]
    IncompatibleColumns,

    #[error("no bracket: {0}")]
    NoBracket(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error in field `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("unknown catalog entry `{0}`")]
    NotFound(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
