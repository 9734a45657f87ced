//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A\u{2020}| entry = {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("support violation: weight {weight:e} on the kernel of the reference state")]
    SupportViolation { weight: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("element {index} is not a projector: {detail}")]
    NotProjector { index: usize, detail: String },

    #[error("projectors {first} and {second} are not orthogonal (max |P_x P_y| entry = {overlap:e})")]
    NotOrthogonal {
        first: usize,
        second: usize,
        overlap: f64,
    },

    #[error("projectors do not sum to identity (max deviation {deviation:e})")]
    NotComplete { deviation: f64 },

    #[error("degenerate eigenvalue cluster (indices {lo}..={hi}) straddles a window threshold")]
    DegenerateSplit { lo: usize, hi: usize },

    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("degenerate series: variance below threshold")]
    DegenerateSeries,

    #[error("|r| must be < 1 for the Fisher transform (got {0})")]
    DegenerateR(f64),

    #[error("ensemble needs at least 2 runs (got {0})")]
    TooFewRuns(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
