use thiserror::Error;

use crate::linalg::Subspace;

/// Errors raised by the library operations.
///
/// Each variant maps onto a stable machine-readable reason code (see
/// [`Error::reason`]) which the command-line surface reports verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix entry count {found} does not match {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("normal {index} is the zero covector")]
    ZeroNormal { index: usize },

    #[error("normals {first} and {second} define the same hyperplane")]
    DuplicateHyperplane { first: usize, second: usize },

    #[error("arrangement is not essential")]
    NotEssential,

    #[error("index set {indices:?} is not a flat")]
    NotAFlat { indices: Vec<usize> },

    #[error("subspace of rank {} is not a flat subspace of the arrangement", .subspace.rank())]
    NotAFlatSubspace { subspace: Subspace },

    #[error("selection is not an order filter: rank {} member misses rank {} flat below it", .upper.rank(), .lower.rank())]
    NotAnOrderFilter { upper: Subspace, lower: Subspace },

    #[error("collection of subspaces is not a partial hyperplane arrangement")]
    InvalidPha,

    #[error("point is not a member of the Schubert variety")]
    NotAMember,

    #[error("linear map is not a morphism of arrangements: preimage of target hyperplane {target} is not a source hyperplane")]
    InvalidMorphism { target: usize, preimage: Subspace },

    #[error("index {index} out of range for ground set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
}

impl Error {
    /// Stable kebab-case reason code.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::ShapeMismatch { .. } => "shape-mismatch",
            Error::ZeroNormal { .. } => "zero-normal",
            Error::DuplicateHyperplane { .. } => "duplicate-hyperplane",
            Error::NotEssential => "not-essential",
            Error::NotAFlat { .. } => "not-a-flat",
            Error::NotAFlatSubspace { .. } => "not-a-flat",
            Error::NotAnOrderFilter { .. } => "not-an-order-filter",
            Error::InvalidPha => "invalid-pha",
            Error::NotAMember => "not-a-member",
            Error::InvalidMorphism { .. } => "invalid-morphism",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
