//! Shift-invert Lanczos for the guided window of `A u = β² B u`.
//!
//! `A - σB` is factored once by a banded `L D Lᵀ` (the meshes are numbered so
//! the bandwidth is one grid row). Lanczos then runs on `(A - σB)⁻¹ B` in the
//! `B` inner product with full reorthogonalization, so Ritz vectors come out
//! `B`-orthogonal to rounding level.

mod banded;
mod lanczos;

pub use banded::{BandedLdlt, BandedSymmetric, SingularPivot};
pub use lanczos::{solve, solve_problem, EigenPair, EigenRequest, EigenSolution};
