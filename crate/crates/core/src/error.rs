//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the simulation and analysis layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A structural parameter (qubit count, bond dimension, ...) is out of range.
    #[error("invalid size: {0}")]
    InvalidSize(String),

    /// A register exceeds the configured exact-simulation limit.
    #[error("capacity exceeded: n = {n} is over the limit of {limit} qubits")]
    Capacity { n: usize, limit: usize },

    /// Two states or operators that must share a register size do not.
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    /// A matrix that must be unitary is not, beyond tolerance.
    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    /// A gate was routed to the tableau backend without a Clifford tableau.
    #[error("gate at layer {layer}, pair ({q1},{q2}) carries no Clifford tableau")]
    MissingCliffordTag { layer: usize, q1: usize, q2: usize },

    /// A forced measurement outcome has (numerically) zero branch weight.
    #[error("impossible outcome at layer {layer}, qubit {qubit} (branch weight {weight:.3e})")]
    ImpossibleOutcome { layer: usize, qubit: usize, weight: f64 },

    /// Both branches of a measurement carry no weight; the state is corrupt.
    #[error("corrupted state: no measurement branch has weight at qubit {qubit}")]
    CorruptedState { qubit: usize },

    /// Input columns that must be orthonormal are not.
    #[error("columns are not orthonormal (deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    /// The MPS violates its canonical-form contract beyond tolerance.
    #[error("canonical form violated at site {site} (deviation {deviation:.3e})")]
    CanonicalForm { site: usize, deviation: f64 },

    /// A quantity fell outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structured input failed validation after parsing.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// JSON (de)serialization failure.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
