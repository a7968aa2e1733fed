use alloc::string::String;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |A - A*| = {defect:e})")]
    NonHermitian { defect: f64 },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("invalid matrix shape: {0}")]
    InvalidShape(String),

    #[error("empty input")]
    EmptyInput,

    #[error("matrix is not normal (||EE* - E*E|| = {defect:e}); use the numerical diameter instead")]
    NotNormal { defect: f64 },

    #[error("map is not self-adjoint")]
    NonSelfAdjoint,

    #[error("map is not scaled trace-preserving")]
    NotScaledTP,

    #[error("map is not paraunital")]
    NotParaunital,

    #[error("null space of the map is not contained in the scalars (rank {rank}, need {required})")]
    NullSpaceTooLarge { rank: usize, required: usize },

    #[error("unknown example map `{0}`")]
    UnknownExample(String),

    #[error("dimension {requested} exceeds the configured maximum {max}")]
    ResourceLimit { requested: usize, max: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("argument is not an observable with spectrum in {{-1, +1}}")]
    NotAnObservable,

    #[error("map is not unital completely positive")]
    NotUcp,

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
