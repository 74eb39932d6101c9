use thiserror::Error;

/// Errors reported by the library.
///
/// Contract violations that a caller can hit with runtime data (empty
/// sequences, missing inputs, failed cross-checks) surface here; plain
/// programmer errors (e.g. evaluating a moment sum at m = 0) panic.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} must not be empty")]
    EmptyInput { what: &'static str },

    #[error("need at least {needed} terms, got {got}")]
    InsufficientTerms { needed: usize, got: usize },

    #[error("need Stieltjes estimates for m = 0..={needed}, got 0..={got}")]
    MissingGammas { needed: usize, got: isize },

    #[error("input estimate for m = {m} has not converged")]
    UnconvergedInput { m: usize },

    #[error("need alternating zeta derivatives up to order {needed}, got {got}")]
    MissingOrders { needed: usize, got: usize },

    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },

    #[error("cannot parse {input:?} as a decimal number")]
    ParseNumber { input: String },

    #[error("{label}: routes disagree by {discrepancy} (allowed {tolerance})")]
    CrossCheckFailed {
        label: &'static str,
        discrepancy: String,
        tolerance: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
