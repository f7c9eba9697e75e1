use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("ragged row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: u64,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: cannot parse {cell:?} as a number")]
    Parse { row: u64, column: usize, cell: String },

    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid point cloud: {0}")]
    InvalidCloud(String),

    #[error("empty point cloud")]
    EmptyCloud,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate {coordinate} of the reference has zero variance")]
    ZeroVariance { coordinate: usize },

    #[error("expected {expected} distances to the new point, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{n} points exceed the Vietoris-Rips cap of {cap}")]
    TooManyPoints { n: usize, cap: usize },

    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("homology dimension {0} is not supported (maximum is 2)")]
    UnsupportedDimension(usize),

    #[error("diagram dimensions differ: {0} vs {1}")]
    DiagramDimension(usize, usize),

    #[error("death {death} precedes birth {birth}")]
    InvalidPair { birth: f64, death: f64 },

    #[error("degenerate diagram: no finite pair with positive lifetime")]
    DegenerateDiagram,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("summary vectors live on different grids")]
    GridMismatch,

    #[error("need at least 2 classes, found {0}")]
    TooFewClasses(usize),

    #[error("class {label:?} has {count} points, need at least {needed}")]
    ClassTooSmall {
        label: String,
        count: usize,
        needed: usize,
    },

    #[error("class {0:?} has a degenerate dimension-0 diagram")]
    DegenerateClass(String),

    #[error("data has no labels")]
    Unlabeled,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("invalid filter: {0}")]
    InvalidFilter(String),

    #[error("invalid window {start}..{end} for {len} samples")]
    InvalidWindow { start: usize, end: usize, len: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
