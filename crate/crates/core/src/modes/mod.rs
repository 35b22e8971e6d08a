//! Guided modes: field completion, power normalization, `(m, n)` labels,
//! census and intensity rasters.

mod fields;
mod label;
mod render;
mod solver;

pub use fields::{normalize, product_integral, reconstruct_fields, triple_integral, ModeFields};
pub use label::{label_mode, parity_defect, LabelResult, ModeLabel, Parity, NOISE_FLOOR};
pub use render::{render_intensity, Raster, RasterSpec};
pub use solver::{
    modes_from_pairs, GuidedMode, ModeRecord, ModeSet, ModeSolver, SolutionStore, SolverSettings, StoredSolution,
};
