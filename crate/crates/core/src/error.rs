use thiserror::Error;

/// Crate-wide error type. Functions expect structurally valid inputs;
/// validation failures are reported through these variants rather than
/// panics so callers can distinguish bad data from bugs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "dimension mismatch: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}"
    )]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry buffer has length {got}, expected {expected}")]
    BadEntryCount { expected: usize, got: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trace {trace:.12e} differs from 1 beyond tolerance")]
    BadTrace { trace: f64 },

    #[error("subsystem dims {dims:?} do not multiply to matrix dimension {dim}")]
    BadSubsystemDims { dims: Vec<usize>, dim: usize },

    #[error("subsystem index {index} invalid for {count} subsystems")]
    InvalidSubsystem { index: usize, count: usize },

    #[error("subsystem selection is empty or repeats an index")]
    BadSelection,

    #[error("eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    EigNotConverged { sweeps: usize, off_norm: f64 },

    #[error("probability {value} outside [0, 1]")]
    InvalidProbability { value: f64 },

    #[error("value {value} outside [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },

    #[error("Kraus operator list is empty")]
    EmptyKrausList,

    #[error("channel is not trace preserving (max deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("expected a qubit-to-qubit channel, got {d_in} -> {d_out}")]
    NotQubitChannel { d_in: usize, d_out: usize },

    #[error("state is not pure (largest eigenvalue {largest:.12})")]
    NotPure { largest: f64 },

    #[error("state vector has near-zero norm")]
    ZeroNorm,

    #[error("amplitude pair is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("ensemble weights sum to {sum:.12}, expected 1")]
    BadEnsembleWeights { sum: f64 },

    #[error("ensemble member {index} is not unitary (deviation {deviation:.3e})")]
    NotUnitary { index: usize, deviation: f64 },

    #[error("ensemble is empty")]
    EmptyEnsemble,

    #[error("postselection never succeeds (acceptance {acceptance:.3e})")]
    ZeroAcceptance { acceptance: f64 },

    #[error("success probability p*q is zero (p={p}, q={q})")]
    ZeroSuccessProbability { p: f64, q: f64 },

    #[error("no crossover found in (0.5, 1]")]
    NoCrossover,

    #[error("input state list is empty")]
    EmptyInputList,

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("grid resolution {got} below minimum {min}")]
    GridTooCoarse { got: usize, min: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
