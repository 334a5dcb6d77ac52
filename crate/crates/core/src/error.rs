//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
///
/// Every rejected precondition names the violated condition so that CLI
/// diagnostics can surface it verbatim.
#[derive(Debug, Error)]
pub enum Error {
    /// A domain precondition on an input was violated (bad prime, bad
    /// congruence class, zero element where nonzero required, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two values from different field/Galois contexts were combined.
    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    /// A numerical search failed to certify a unique consistent answer at
    /// the working precision (caller may retry at doubled precision).
    #[error("resolution failed at {prec} bits: {reason}")]
    Resolution { prec: u32, reason: String },

    /// Exact recognition of a numeric value (integer / quadratic integer)
    /// failed at the working precision.
    #[error("recognition failed at {prec} bits: {reason}")]
    Recognition { prec: u32, reason: String },

    /// A required non-canonical choice (extension of a Hecke character to
    /// non-principal ideals) was not supplied.
    #[error("choice required: {0}")]
    ChoiceRequired(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Convenience constructor for domain errors.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Convenience constructor for context-mismatch errors.
    pub fn context(msg: impl Into<String>) -> Self {
        Error::ContextMismatch(msg.into())
    }
}
