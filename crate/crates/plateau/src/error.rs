use thiserror::Error;

use crate::complex::CellId;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("edge ({0}, {1}) is shared by {2} triangles")]
    NonManifoldEdge(usize, usize, usize),

    #[error("triangle {0} repeats a vertex")]
    DegenerateTriangle(usize),

    #[error("cell count exceeds the 32-bit index space")]
    SizeOverflow,

    #[error("invalid complex: {0}")]
    InvalidComplex(&'static str),

    #[error("boundary structure is not a union of simple cycles: {0}")]
    InvalidBoundary(&'static str),

    #[error("1-cell {edge} has {count} cofacets; a closed surface requires exactly 2")]
    NotClosedSurface { edge: CellId, count: usize },

    #[error("no value supplied for 0-cell {0}")]
    MissingVertexValue(CellId),

    #[error("no value supplied for 2-cell {0}")]
    MissingCellValue(CellId),

    #[error("function and gradient field are inconsistent")]
    InconsistentInput,

    #[error("cell {0} is not critical")]
    NotCritical(CellId),

    #[error("cell {cell} has dimension {dim}, which this operation does not accept")]
    WrongDimension { cell: CellId, dim: u8 },

    #[error("expected exactly one V-path, found {found}")]
    NonUniquePath { found: usize },

    #[error("gradient field contains a closed V-path")]
    CycleDetected,

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
