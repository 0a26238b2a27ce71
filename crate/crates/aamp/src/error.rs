//! Error type shared by the simulator and the amplification engines.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Requested register size is outside the supported range.
    #[error("qubit count {n} out of range [{min}, {max}]")]
    QubitCountOutOfRange { n: usize, min: usize, max: usize },

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A gate references a qubit outside the circuit register.
    #[error("qubit index {index} out of bounds for {n_qubits}-qubit circuit")]
    QubitIndexOutOfBounds { index: usize, n_qubits: usize },

    /// A gate was built with overlapping target and control sets, a missing
    /// angle, or the wrong number of operands.
    #[error("malformed gate: {0}")]
    MalformedGate(String),

    /// A target set was empty or covered the whole space when it must not.
    #[error("invalid target set: {0}")]
    InvalidTargets(String),

    /// Numeric argument outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Amplitude vector cannot be normalized (zero or non-finite norm).
    #[error("amplitude vector is not normalizable: norm = {norm}")]
    NotNormalizable { norm: f64 },

    /// Amplitude vector is not unit-norm and auto-normalization was not requested.
    #[error("amplitude vector is not normalized: norm = {norm}, tolerance = {tol}")]
    NotNormalized { norm: f64, tol: f64 },

    /// The initial state has no overlap with the target set.
    #[error("initial state has zero overlap with the target set")]
    ZeroTargetOverlap,

    /// A node's projected target set lies outside the support of its marginal.
    #[error("node {node} is infeasible: local targets have zero marginal probability")]
    InfeasibleNode { node: usize },

    /// Partition shape is invalid for the register.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// Text IR or CSV input could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
