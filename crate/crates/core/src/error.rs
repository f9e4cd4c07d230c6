use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix ({a}, {b}; {c}, {d}) has determinant {det}, expected 1")]
    Determinant {
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        det: i128,
    },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "series needs more than {max_terms} terms for tolerance {tolerance:e} \
         (Im tau = {im_tau:e}); use the reducing evaluator near the real axis"
    )]
    Truncation {
        max_terms: usize,
        tolerance: f64,
        im_tau: f64,
    },

    #[error("fundamental-domain reduction did not converge within {0} steps")]
    NonConvergence(usize),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
