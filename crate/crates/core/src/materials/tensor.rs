use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Axis, Polarization};
use crate::{Error, Result};

/// Second-order susceptibility of an mm2 crystal, pm/V, crystal frame.
/// Elements involving `x_c` as output index are not modelled and read as zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NonlinearTensor {
    pub d33: f64,
    pub d32: f64,
    pub d24: f64,
}

impl Default for NonlinearTensor {
    fn default() -> Self {
        Self {
            d33: 10.7,
            d32: 2.65,
            d24: 2.65,
        }
    }
}

impl NonlinearTensor {
    /// Element a process of type `t` runs on.
    pub fn nonlinear_element(&self, t: ShgType) -> f64 {
        let (i, j, k) = t.index_triples()[0];
        self.element(i, j, k)
    }

    /// `d_ijk` with all three indices in the waveguide frame.
    pub fn element(&self, i: Axis, j: Axis, k: Axis) -> f64 {
        // crystal indices: 0 = x_c, 1 = y_c, 2 = z_c
        let (ci, cj, ck) = (i.crystal_axis(), j.crystal_axis(), k.crystal_axis());
        let (a, b) = if cj <= ck { (cj, ck) } else { (ck, cj) };
        match (ci, a, b) {
            (2, 2, 2) => self.d33,
            (2, 1, 1) => self.d32,
            (1, 1, 2) => self.d24,
            _ => 0.0,
        }
    }

    /// Nonzero `(i, j, k, d_ijk)` entries a process of type `t` couples through,
    /// restricted to the dominant transverse field components.
    pub fn contraction(&self, t: ShgType) -> Vec<(Axis, Axis, Axis, f64)> {
        t.index_triples()
            .iter()
            .map(|&(i, j, k)| (i, j, k, self.element(i, j, k)))
            .collect()
    }
}

/// Polarization class of a second-harmonic process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShgType {
    /// TM + TM → TM
    #[serde(rename = "0")]
    Type0,
    /// TE + TE → TM
    #[serde(rename = "I")]
    TypeI,
    /// TE + TM → TE
    #[serde(rename = "II")]
    TypeII,
}

impl ShgType {
    pub const ALL: [ShgType; 3] = [ShgType::Type0, ShgType::TypeI, ShgType::TypeII];

    pub fn sh_polarization(self) -> Polarization {
        match self {
            ShgType::Type0 | ShgType::TypeI => Polarization::Tm,
            ShgType::TypeII => Polarization::Te,
        }
    }

    pub fn pump_polarizations(self) -> (Polarization, Polarization) {
        match self {
            ShgType::Type0 => (Polarization::Tm, Polarization::Tm),
            ShgType::TypeI => (Polarization::Te, Polarization::Te),
            ShgType::TypeII => (Polarization::Te, Polarization::Tm),
        }
    }

    /// True when both pump photons come from the same polarization family.
    pub fn is_degenerate_pair(self) -> bool {
        let (a, b) = self.pump_polarizations();
        a == b
    }

    /// `(i, j, k)` for `E_i(2ω) ← d_ijk E_j(ω) E_k(ω)` in waveguide axes.
    pub fn index_triples(self) -> &'static [(Axis, Axis, Axis)] {
        match self {
            ShgType::Type0 => &[(Axis::Y, Axis::Y, Axis::Y)],
            ShgType::TypeI => &[(Axis::Y, Axis::X, Axis::X)],
            ShgType::TypeII => &[(Axis::X, Axis::X, Axis::Y), (Axis::X, Axis::Y, Axis::X)],
        }
    }
}

impl fmt::Display for ShgType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShgType::Type0 => "0",
            ShgType::TypeI => "I",
            ShgType::TypeII => "II",
        })
    }
}

impl FromStr for ShgType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let t = t.strip_prefix("type").unwrap_or(&t).trim_start_matches(['-', '_', ' ']);
        match t {
            "0" => Ok(ShgType::Type0),
            "i" | "1" => Ok(ShgType::TypeI),
            "ii" | "2" => Ok(ShgType::TypeII),
            _ => Err(Error::domain("ShgType::from_str", format!("unknown process type {s:?}"))),
        }
    }
}
