//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by operator construction and the numerical kernels.
#[derive(Debug, Error)]
pub enum QslError {
    /// Operands live on different Hilbert-space dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// Matrix fails the Hermiticity tolerance.
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    /// Matrix fails the unitarity tolerance.
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    /// Operator has a non-negligible trace where a traceless one is required.
    #[error("operator is not traceless (|tr| = {trace:.3e})")]
    NotTraceless { trace: f64 },

    /// Observable is not unit-norm where the operation requires it.
    #[error("operator is not unit-norm (norm = {norm:.17})")]
    NotUnitNorm { norm: f64 },

    /// Argument outside the supported range.
    #[error("argument out of range: {0}")]
    Range(String),

    /// An eigensolver or other numerical kernel failed to converge or verify.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The target gate is the identity up to a global phase; no generator exists.
    #[error("gate is identity up to a global phase (t_star = 0); no optimal generator")]
    DegenerateGate,

    /// Degenerate input for which the operation is undefined.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Unknown gate or registry entry.
    #[error("not found: {0}")]
    NotFound(String),

    /// Malformed textual input (Pauli word, JSON operator, ...).
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, QslError>;
