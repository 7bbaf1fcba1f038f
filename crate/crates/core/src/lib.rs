//! Exact computations on hyperplane arrangements, their matroid Schubert
//! varieties, and the chart atlases of partial hyperplane arrangements.
//!
//! All arithmetic is over the rationals with arbitrary-precision integers.

pub mod arrangement;
pub mod atlas;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod pha;
pub mod sampling;
pub mod schubert;

pub use arrangement::{Arrangement, FlatLattice, MatroidFlat, Restriction};
pub use atlas::{Atlas, Chart};
pub use error::{Error, Result};
pub use linalg::{LinearMap, Matrix, Rational, Subspace};
pub use pha::PartialHyperplaneArrangement;
pub use schubert::{ExtendedPoint, ExtendedScalar, SchubertVariety};
