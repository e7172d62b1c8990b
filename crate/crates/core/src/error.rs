use thiserror::Error;

/// Errors raised by the hypermatrix, state and checker layers.
///
/// Mode and subsystem indices in messages are 1-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape {0:?}: order must be at least 1 and every dimension positive")]
    InvalidShape(Vec<usize>),

    #[error("data length {got} does not match shape {shape:?} (expected {expected})")]
    DataLength {
        shape: Vec<usize>,
        expected: usize,
        got: usize,
    },

    #[error("expected {expected} matrices (one per mode), got {got}")]
    Arity { expected: usize, got: usize },

    #[error("dimension mismatch in mode {mode}: matrix has {got} columns, mode has size {expected}")]
    ModeMismatch {
        mode: usize,
        expected: usize,
        got: usize,
    },

    #[error("mode {mode} out of range for a hypermatrix of order {order}")]
    ModeOutOfRange { mode: usize, order: usize },

    #[error("expected shape {expected}, got {got:?}")]
    Shape { expected: String, got: Vec<usize> },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("subsystem dimensions {dims:?} multiply to {product}, but the matrix is {size}x{size}")]
    DimsProduct {
        dims: Vec<usize>,
        product: usize,
        size: usize,
    },

    #[error("subsystem dimension {0} is too small (need at least 2)")]
    DimensionTooSmall(usize),

    #[error("matrix is not Hermitian: max |rho - rho^dagger| = {0:.3e}")]
    NotHermitian(f64),

    #[error("trace is {trace:.12} (deviation {deviation:.3e} from 1)")]
    Trace { trace: f64, deviation: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {0:.3e}")]
    NotPsd(f64),

    #[error("matrix is not unitary: max |U^dagger U - I| = {0:.3e}")]
    NotUnitary(f64),

    #[error("subsystem {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("family member {member} has {got} rows, expected {expected}")]
    RowMismatch {
        member: usize,
        expected: usize,
        got: usize,
    },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("quiver representations differ: {0}")]
    QuiverMismatch(String),

    #[error("states are incompatible: {0}")]
    StateMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
