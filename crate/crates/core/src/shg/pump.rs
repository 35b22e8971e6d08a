use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::beta::{nm_from_omega, omega_from_nm};
use super::process::ModeId;
use crate::materials::Polarization;
use crate::modes::ModeLabel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PumpShape {
    /// Gaussian spectral intensity with the given FWHM.
    #[default]
    Gaussian,
    /// Uniform intensity over a band one FWHM wide.
    Flat,
}

/// Complex amplitude carried by one pump mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModalAmplitude {
    pub polarization: Polarization,
    pub label: ModeLabel,
    pub amplitude: Complex64,
}

/// Pulsed pump at the waveguide input.
///
/// The field of mode `(b, l)` is `√power · a_bl · g(ω)` with `Σ|a_bl|² = 1`
/// and `∫ g² dω = 1` before the filter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PumpSpec {
    pub center_nm: f64,
    /// Spectral intensity FWHM, nm.
    pub fwhm_nm: f64,
    pub shape: PumpShape,
    /// Hard passband `(lo, hi)` in nm.
    pub filter_nm: Option<(f64, f64)>,
    /// Total pump power, arbitrary units.
    pub power: f64,
    pub amplitudes: Vec<ModalAmplitude>,
}

impl Default for PumpSpec {
    fn default() -> Self {
        Self {
            center_nm: 800.0,
            fwhm_nm: 10.0,
            shape: PumpShape::Gaussian,
            filter_nm: None,
            power: 1.0,
            amplitudes: vec![
                ModalAmplitude {
                    polarization: Polarization::Te,
                    label: ModeLabel::FUNDAMENTAL,
                    amplitude: Complex64::new(1.0, 0.0),
                },
                ModalAmplitude {
                    polarization: Polarization::Tm,
                    label: ModeLabel::FUNDAMENTAL,
                    amplitude: Complex64::new(1.0, 0.0),
                },
            ],
        }
        .normalized()
    }
}

impl PumpSpec {
    pub fn gaussian(center_nm: f64, fwhm_nm: f64) -> Self {
        Self {
            center_nm,
            fwhm_nm,
            ..Self::default()
        }
    }

    pub fn flat(center_nm: f64, width_nm: f64) -> Self {
        Self {
            center_nm,
            fwhm_nm: width_nm,
            shape: PumpShape::Flat,
            ..Self::default()
        }
    }

    /// Replaces the modal table and rescales it to unit total power.
    pub fn with_amplitudes(mut self, amplitudes: Vec<ModalAmplitude>) -> Self {
        self.amplitudes = amplitudes;
        self.normalized()
    }

    /// Equal power in every listed mode.
    pub fn with_uniform_modes(self, modes: impl IntoIterator<Item = ModeId>) -> Self {
        let amps = modes
            .into_iter()
            .map(|id| ModalAmplitude {
                polarization: id.polarization,
                label: id.label,
                amplitude: Complex64::new(1.0, 0.0),
            })
            .collect();
        self.with_amplitudes(amps)
    }

    pub fn with_filter(mut self, lo_nm: f64, hi_nm: f64) -> Self {
        self.filter_nm = Some((lo_nm, hi_nm));
        self
    }

    pub fn with_power(mut self, power: f64) -> Self {
        self.power = power;
        self
    }

    pub fn normalized(mut self) -> Self {
        let total: f64 = self.amplitudes.iter().map(|a| a.amplitude.norm_sqr()).sum();
        if total > 0.0 {
            let s = 1.0 / total.sqrt();
            if (s - 1.0).abs() > 4.0 * f64::EPSILON {
                for a in &mut self.amplitudes {
                    a.amplitude *= s;
                }
            }
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center_nm > 0.0 && self.center_nm.is_finite()) {
            return Err(Error::Config(format!("pump center must be > 0 nm, got {}", self.center_nm)));
        }
        if !(self.fwhm_nm > 0.0 && self.fwhm_nm < self.center_nm) {
            return Err(Error::Config(format!("pump FWHM must be > 0 nm, got {}", self.fwhm_nm)));
        }
        if !(self.power >= 0.0 && self.power.is_finite()) {
            return Err(Error::Config(format!("pump power must be >= 0, got {}", self.power)));
        }
        if let Some((lo, hi)) = self.filter_nm {
            if !(lo > 0.0 && hi > lo) {
                return Err(Error::Config(format!("pump filter ({lo}, {hi}) nm is empty")));
            }
        }
        let total: f64 = self.amplitudes.iter().map(|a| a.amplitude.norm_sqr()).sum();
        if !self.amplitudes.is_empty() && (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("modal amplitudes carry total power {total}, expected 1")));
        }
        Ok(())
    }

    /// `a_bl`, zero for modes not listed.
    pub fn amplitude(&self, id: ModeId) -> Complex64 {
        self.amplitudes
            .iter()
            .filter(|a| a.polarization == id.polarization && a.label == id.label)
            .map(|a| a.amplitude)
            .sum()
    }

    pub fn modes(&self) -> Vec<ModeId> {
        self.amplitudes.iter().map(|a| ModeId::new(a.polarization, a.label)).collect()
    }

    pub fn omega_center(&self) -> f64 {
        omega_from_nm(self.center_nm)
    }

    /// Intensity FWHM in angular frequency, rad/fs.
    pub fn omega_fwhm(&self) -> f64 {
        omega_from_nm(self.center_nm - 0.5 * self.fwhm_nm) - omega_from_nm(self.center_nm + 0.5 * self.fwhm_nm)
    }

    /// Frequency interval outside which `g` is treated as zero: ±3 FWHM for a
    /// Gaussian, the band itself when flat, cut to the filter.
    pub fn support(&self) -> (f64, f64) {
        let w0 = self.omega_center();
        let dw = self.omega_fwhm();
        let half = match self.shape {
            PumpShape::Gaussian => 3.0 * dw,
            PumpShape::Flat => 0.5 * dw,
        };
        let (mut lo, mut hi) = (w0 - half, w0 + half);
        if let Some((a, b)) = self.filter_nm {
            lo = lo.max(omega_from_nm(b));
            hi = hi.min(omega_from_nm(a));
        }
        (lo, hi)
    }

    /// Wavelength span of [`PumpSpec::support`], nm, shortest first.
    pub fn band_nm(&self) -> (f64, f64) {
        let (lo, hi) = self.support();
        (nm_from_omega(hi), nm_from_omega(lo))
    }

    /// Real spectral envelope `g(ω)`, zero outside the support.
    pub fn envelope(&self, omega: f64) -> f64 {
        let (lo, hi) = self.support();
        if omega < lo || omega > hi {
            return 0.0;
        }
        let dw = self.omega_fwhm();
        match self.shape {
            PumpShape::Gaussian => {
                // intensity exp(-4 ln2 δ²/Δω²), amplitude the square root
                let d = omega - self.omega_center();
                let norm = (dw * dw / (4.0 * LN_2) * std::f64::consts::PI).sqrt();
                (-2.0 * LN_2 * d * d / (dw * dw)).exp() / norm.sqrt()
            }
            PumpShape::Flat => 1.0 / dw.sqrt(),
        }
    }

    /// Input field of mode `id` at `omega`.
    pub fn field(&self, id: ModeId, omega: f64) -> Complex64 {
        self.amplitude(id) * (self.power.sqrt() * self.envelope(omega))
    }
}
