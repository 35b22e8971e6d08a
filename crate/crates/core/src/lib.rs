//! Simulation and design of pulsed second-harmonic generation in periodically
//! poled, diffused channel waveguides.
//!
//! The pipeline runs bottom-up:
//!
//! - [`materials`]: geometry, anisotropic graded index profile with chromatic
//!   dispersion, poling harmonics and nonlinear tensor elements.
//! - [`fem`]: conforming triangular mesh and Galerkin assembly of the
//!   semi-vectorial magnetic-field equations, giving `A u = β² B u`.
//! - [`eigen`]: shift-invert Lanczos on the banded factorization of `A - σB`.
//! - [`modes`]: field reconstruction, power normalization, `(m,n)` labels,
//!   mode census and intensity rasters.
//! - [`shg`]: overlap coefficients, QPM phase mismatch, coupling function,
//!   pulsed SH spectra, spectral broadening and polarization response.
//! - [`scan`]: phase-matched wavelengths, optimal poling periods, sensitivity
//!   scans, geometry-dependent spectra and the process table.
//! - [`oracles`]: independent reference routines used for validation.
//! - [`cli`]: configuration, caching and file export behind the `qpmshg` binary.

pub mod cli;
pub mod eigen;
pub mod error;
pub mod fem;
pub mod materials;
pub mod modes;
pub mod oracles;
pub mod scan;
pub mod shg;

pub use error::{Error, Result};

/// Speed of light in µm/fs.
pub const SPEED_OF_LIGHT_UM_PER_FS: f64 = 0.299_792_458;
