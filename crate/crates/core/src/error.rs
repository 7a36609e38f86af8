use thiserror::Error;

/// Errors raised by the structural computations in this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    #[error("invalid Cartan data: {0}")]
    InvalidCartanData(String),

    #[error("ad(a) is not simultaneously diagonalizable: {0}")]
    NonSemisimpleAction(String),

    #[error("element is not in the group: {0}")]
    NotInGroup(String),

    #[error("element is not in A: {0}")]
    NotInA(String),

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("unknown restricted root index {0}")]
    UnknownRoot(usize),

    #[error("element lies outside the open cell N·A·H_t")]
    NotInCell,

    #[error("point lies outside every chart tried")]
    NotInChart,

    #[error("A-section is ambiguous: the group has noncompact center and no section was chosen")]
    CenterAmbiguity,

    #[error("unsupported for this backend: {0}")]
    Unsupported(String),

    #[error("empty sample")]
    EmptySample,

    #[error("window radii differ ({0} vs {1})")]
    IncompatibleWindows(f64, f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("arrows are not composable (distance {0:.3e})")]
    NotComposable(f64),

    #[error("arrow base lies in the wrong orbit: {0}")]
    WrongOrbit(String),

    #[error("endpoints lie on different sides of a hyperplane (coordinate {0})")]
    SignMismatch(usize),

    #[error("operation requires SL(2,R), got {0}")]
    WrongGroup(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
