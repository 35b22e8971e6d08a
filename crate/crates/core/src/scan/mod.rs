//! Phase-matched wavelengths, optimal poling periods, parameter sensitivity,
//! geometry-dependent spectra and the table of individual processes.

mod cache;
mod matching;
mod sensitivity;
mod study;
mod table;

pub use cache::DiskCache;
pub use matching::{
    degenerate_mismatch, designated_harmonic, find_phase_matched_wavelength, ideal_line_width,
    implicit_period_slope,
    optimal_poling_period, table_bracket, OptimalPeriod, PhaseMatch, ROOT_TOLERANCE,
};
pub use sensitivity::{sensitivity_scan, spectrum_vs_geometry, GeometrySpectrum, ScanParam, ScanResult};
pub use study::{allowed_processes, matchable_in, Study, OVERLAP_THRESHOLD};
pub use table::{process_table, process_table_on, ProcessTable, RelativePowerMetric, TableRow};
