//! Second-harmonic generation: overlap coefficients, QPM phase mismatch, the
//! coupling function, pulsed SH spectra, broadening and the polarization
//! response.
//!
//! Frequencies are angular, in rad/fs; propagation constants in µm⁻¹.

mod basis;
mod beta;
mod overlap;
mod polarization;
mod process;
mod pump;
mod spectrum;

pub use basis::{BandPlan, ModalBasis};
pub use beta::{nm_from_omega, omega_from_nm, BetaCurve, BetaTable, BetaTables};
pub use overlap::{coupling_gamma, overlap_coefficient, phase_mismatch, Overlap};
pub use polarization::{polarization_powers, polarization_response, PolarizationResponse, TypeWeights};
pub use process::{Device, ModeId, ProcessTriple};
pub use pump::{ModalAmplitude, PumpShape, PumpSpec};
pub(crate) use spectrum::csv_err;
pub use spectrum::{
    broaden, fwhm, fwhm_around, integrate, local_maxima, sh_spectrum, wavelength_grid, GammaModel, Process,
    ShgModel, Spectrum, SpectrumOptions,
};
