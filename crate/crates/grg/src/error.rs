//! Crate-wide error type.

use crate::symexpr::ParseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("index {value} out of range for dimension {dim} (indices are nonzero and |i| <= dim)")]
    IndexOutOfRange { value: i32, dim: usize },

    #[error("index 0 is not valid (positive = covariant, negative = contravariant)")]
    ZeroIndex,

    #[error("bad indices: {0}")]
    BadIndices(String),

    #[error("tensor `{0}` expects {1} indices, got {2}")]
    WrongArity(String, usize, usize),

    #[error("unknown tensor `{0}`")]
    UnknownTensor(String),

    #[error("no manifold is open")]
    NoManifold,

    #[error("metric must be square; got {rows} rows with a row of width {cols}")]
    NonSquareMetric { rows: usize, cols: usize },

    #[error("metric entry ({i},{j}) is not symmetric with ({j},{i})")]
    AsymmetricMetric { i: usize, j: usize },

    #[error("metric is singular at a probe point inside the assumed domain")]
    SingularMetric,

    #[error("coordinate `{0}` declared more than once")]
    DuplicateCoordinate(String),

    #[error("line element: {0}")]
    LineElement(String),

    #[error("assumption: {0}")]
    Assumption(String),

    #[error("vector `{0}` has zero square; hypersurface projection needs a non-null normal")]
    NullVector(String),

    #[error("spec file: {0}")]
    SpecFile(String),

    #[error("unsupported dimension {0}: this operation needs a 4-dimensional manifold")]
    NeedsDimensionFour(usize),

    #[error("unsupported dimension {got}: {need}")]
    Dimension { need: String, got: usize },

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
