//! Interface-conforming triangular meshes and Galerkin assembly of the
//! semi-vectorial magnetic-field mode equations.

mod assemble;
mod mesh;
mod sparse;

pub use assemble::{assemble, assemble_with, wavenumber, AssembledProblem, AssemblyStats, ElementCoefficients};
pub use mesh::{build_mesh, from_grid, graded_grid, Mesh, MeshParams, MIN_TRIANGLE_AREA};
pub use sparse::CsrMatrix;
