//! Sparse storage, orderings and direct solvers.

mod banded;
pub mod dense;
pub mod ordering;
mod profile;
mod scalar;
mod solver;
mod sparse;

pub use banded::BandedLu;
pub use profile::ProfileLdlt;
pub use scalar::{dot, norm2, Scalar};
pub use solver::{SparseSolver, MAX_PIVOT_RATIO, REFINE_TOL};
pub use sparse::{CsrMatrix, SparseComplexMatrix, SparseSymMatrix};
