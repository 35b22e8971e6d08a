//! Waveguide geometry, anisotropic graded index profile, poling harmonics and
//! the nonlinear tensor.
//!
//! Two frames appear here. The waveguide frame has `x` across the channel,
//! `y` pointing into the substrate (air at `y < 0`) and `z` along propagation.
//! The crystal axes `(x_c, y_c, z_c)` coincide with waveguide `(z, x, y)`.
//! Lengths are in µm, wavelengths in nm at every public boundary.

mod dispersion;
mod geometry;
mod poling;
mod tensor;

pub use dispersion::{AxisCalibration, DispersionModel, Sellmeier, LAMBDA_MAX_NM, LAMBDA_MIN_NM};
pub use geometry::{Cover, DepthProfile, IndexProfile, IndexSampler, Waveguide, WaveguideGeometry, Window};
pub use poling::{poling_harmonic_amplitude, PolingSpec};
pub use tensor::{NonlinearTensor, ShgType};

use serde::{Deserialize, Serialize};
use std::fmt;

/// Principal axis in the waveguide frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// Crystal axis lying along this waveguide axis, as 0 = x_c, 1 = y_c, 2 = z_c.
    pub fn crystal_axis(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 0,
        }
    }
}

/// Semi-vectorial mode class.
///
/// Quasi-TE modes carry their electric field mainly along `x`, quasi-TM modes
/// mainly along `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    #[serde(rename = "TE")]
    Te,
    #[serde(rename = "TM")]
    Tm,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Te, Polarization::Tm];

    /// Axis of the dominant electric field component.
    pub fn electric_axis(self) -> Axis {
        match self {
            Polarization::Te => Axis::X,
            Polarization::Tm => Axis::Y,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::Te => "TE",
            Polarization::Tm => "TM",
        })
    }
}

impl std::str::FromStr for Polarization {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TE" => Ok(Polarization::Te),
            "TM" => Ok(Polarization::Tm),
            other => Err(crate::Error::domain(
                "polarization",
                format!("unknown polarization '{other}'"),
            )),
        }
    }
}
