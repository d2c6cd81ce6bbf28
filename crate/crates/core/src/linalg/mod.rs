//! Exact linear algebra over the two-element field.
//!
//! Dense matrices are bit-packed rows with leftmost pivoting, so results are
//! deterministic. [`SparseMatrix`] handles the few differentials that are too
//! large to hold densely.

mod bitvec;
mod echelon;
mod matrix;
mod sparse;
mod subspace;

pub use bitvec::BitVec;
pub use echelon::Echelon;
pub use matrix::{kernel_basis, rref, solve, BitMatrix};
pub use sparse::{xor_sorted, ColumnReduction, SparseMatrix};
pub use subspace::{quotient_reps, QuotientSpace, Subspace};
