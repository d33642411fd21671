use thiserror::Error;

/// Errors raised by the relation engine and the interferometer pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation of U^dag U from I is {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalised (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("Bloch vector has length {length} > 1")]
    BlochVectorTooLong { length: f64 },

    #[error("rotation axis is not a unit vector (|axis| = {norm})")]
    NonUnitAxis { norm: f64 },

    #[error("operation requires a qubit (dimension 2), got dimension {dim}")]
    NotQubit { dim: usize },

    #[error("{what} must lie in [0, 1], got {value}")]
    OutOfUnitInterval { what: &'static str, value: f64 },

    #[error("Bargmann phase is undefined: states {0} and {1} are orthogonal")]
    UndefinedPhase(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("phase grid must have at least 8 points covering a full period ({0})")]
    NonSpanningGrid(String),

    #[error("fringe fit for {0} has an unconstrained phase (amplitude too small)")]
    UnconstrainedPhase(String),

    #[error("missing scan: {0}")]
    MissingScan(String),

    #[error("the OUR reconstruction from visibilities requires a pure input state")]
    RequiresPureState,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed scan file: {0}")]
    MalformedScan(String),
}

pub type Result<T> = std::result::Result<T, Error>;
