use serde::{Deserialize, Serialize};

use super::Axis;
use crate::{Error, Result};

/// Lower edge of the wavelength domain the dispersion model is defined on.
pub const LAMBDA_MIN_NM: f64 = 350.0;
/// Upper edge of the wavelength domain.
pub const LAMBDA_MAX_NM: f64 = 1100.0;

/// Single-pole Sellmeier form `n² = a + b / (1 - (c/λ)²) - d λ²`, λ in µm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sellmeier {
    pub a: f64,
    pub b: f64,
    pub c_um: f64,
    pub d_per_um2: f64,
}

impl Sellmeier {
    pub fn index(&self, lambda_um: f64) -> f64 {
        let r = self.c_um / lambda_um;
        (self.a + self.b / (1.0 - r * r) - self.d_per_um2 * lambda_um * lambda_um).sqrt()
    }
}

/// KTP crystal-axis fits (flux grown, room temperature), ordered `x_c, y_c, z_c`.
pub const KTP_SELLMEIER: [Sellmeier; 3] = [
    Sellmeier {
        a: 2.1146,
        b: 0.89188,
        c_um: 0.20861,
        d_per_um2: 0.01320,
    },
    Sellmeier {
        a: 2.1518,
        b: 0.87862,
        c_um: 0.21801,
        d_per_um2: 0.01327,
    },
    Sellmeier {
        a: 2.3136,
        b: 1.00012,
        c_um: 0.23831,
        d_per_um2: 0.01679,
    },
];

/// Two anchor wavelengths with the substrate index and the surface increment
/// measured there. The substrate index is the Sellmeier value plus a
/// correction linear in λ that passes exactly through both anchors; the
/// increment is interpolated linearly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisCalibration {
    pub lambda_nm: [f64; 2],
    pub substrate_index: [f64; 2],
    pub increment: [f64; 2],
}

impl AxisCalibration {
    fn lerp(&self, values: [f64; 2], lambda_nm: f64) -> f64 {
        let t = (lambda_nm - self.lambda_nm[0]) / (self.lambda_nm[1] - self.lambda_nm[0]);
        values[0] + t * (values[1] - values[0])
    }
}

/// Wavelength dependent substrate indices `n_ξ0(λ)` and surface increments
/// `Δn_ξ(λ)` in the waveguide frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispersionModel {
    /// Crystal-frame Sellmeier fits, `x_c, y_c, z_c`.
    pub sellmeier: [Sellmeier; 3],
    /// Calibration of the waveguide `x` axis.
    pub calib_x: AxisCalibration,
    /// Calibration of the waveguide `y` axis.
    pub calib_y: AxisCalibration,
    /// Optional calibration of the waveguide `z` axis. Without it `n_z0` comes
    /// from the Sellmeier fit alone and `Δn_z` follows `Δn_x`.
    pub calib_z: Option<AxisCalibration>,
}

impl Default for DispersionModel {
    fn default() -> Self {
        Self {
            sellmeier: KTP_SELLMEIER,
            calib_x: AxisCalibration {
                lambda_nm: [400.0, 800.0],
                substrate_index: [1.84435, 1.75719],
                increment: [0.018, 0.009],
            },
            calib_y: AxisCalibration {
                lambda_nm: [400.0, 800.0],
                substrate_index: [1.96775, 1.84546],
                increment: [0.019, 0.013],
            },
            calib_z: None,
        }
    }
}

impl DispersionModel {
    pub fn check_wavelength(op: &'static str, lambda_nm: f64) -> Result<()> {
        if !(LAMBDA_MIN_NM..=LAMBDA_MAX_NM).contains(&lambda_nm) {
            return Err(Error::domain(
                op,
                format!(
                    "wavelength {lambda_nm} nm outside [{LAMBDA_MIN_NM}, {LAMBDA_MAX_NM}] nm"
                ),
            ));
        }
        Ok(())
    }

    fn calibration(&self, axis: Axis) -> Option<&AxisCalibration> {
        match axis {
            Axis::X => Some(&self.calib_x),
            Axis::Y => Some(&self.calib_y),
            Axis::Z => self.calib_z.as_ref(),
        }
    }

    /// Whether `axis` is pinned to measured values rather than the bare fit.
    pub fn is_calibrated(&self, axis: Axis) -> bool {
        self.calibration(axis).is_some()
    }

    /// Uncorrected crystal fit for the crystal axis lying along `axis`.
    pub fn sellmeier_index(&self, axis: Axis, lambda_nm: f64) -> f64 {
        self.sellmeier[axis.crystal_axis()].index(lambda_nm * 1e-3)
    }

    /// Substrate index `n_ξ0(λ)`.
    pub fn substrate_index(&self, axis: Axis, lambda_nm: f64) -> Result<f64> {
        Self::check_wavelength("substrate_index", lambda_nm)?;
        let base = self.sellmeier_index(axis, lambda_nm);
        Ok(match self.calibration(axis) {
            Some(cal) => {
                let offsets = [
                    cal.substrate_index[0] - self.sellmeier_index(axis, cal.lambda_nm[0]),
                    cal.substrate_index[1] - self.sellmeier_index(axis, cal.lambda_nm[1]),
                ];
                base + cal.lerp(offsets, lambda_nm)
            }
            None => base,
        })
    }

    /// Surface index increment `Δn_ξ(λ)`.
    pub fn increment(&self, axis: Axis, lambda_nm: f64) -> Result<f64> {
        Self::check_wavelength("increment", lambda_nm)?;
        let cal = self.calibration(axis).unwrap_or(&self.calib_x);
        Ok(cal.lerp(cal.increment, lambda_nm))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, cal) in [("calib_x", Some(&self.calib_x)), ("calib_y", Some(&self.calib_y)), ("calib_z", self.calib_z.as_ref())] {
            let Some(cal) = cal else { continue };
            if (cal.lambda_nm[1] - cal.lambda_nm[0]).abs() < 1e-9 {
                return Err(Error::Config(format!("{name}: anchor wavelengths coincide")));
            }
            for l in cal.lambda_nm {
                Self::check_wavelength("dispersion", l)
                    .map_err(|e| Error::Config(format!("{name}: {e}")))?;
            }
        }
        for axis in Axis::ALL {
            for l in [LAMBDA_MIN_NM, 400.0, 800.0, LAMBDA_MAX_NM] {
                let n = self.substrate_index(axis, l)?;
                let dn = self.increment(axis, l)?;
                if !(n >= 1.0) || !n.is_finite() || !dn.is_finite() {
                    return Err(Error::Config(format!(
                        "index model for {axis:?} gives n={n}, Δn={dn} at {l} nm"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_the_eight_anchor_values() {
        let m = DispersionModel::default();
        let cases = [
            (Axis::X, 800.0, 1.75719, 0.009),
            (Axis::Y, 800.0, 1.84546, 0.013),
            (Axis::X, 400.0, 1.84435, 0.018),
            (Axis::Y, 400.0, 1.96775, 0.019),
        ];
        for (axis, l, n, dn) in cases {
            assert!((m.substrate_index(axis, l).unwrap() - n).abs() <= 1e-4);
            assert!((m.increment(axis, l).unwrap() - dn).abs() <= 1e-4);
        }
    }

    #[test]
    fn indices_above_one_and_normally_dispersive() {
        let m = DispersionModel::default();
        for axis in Axis::ALL {
            let mut prev = f64::INFINITY;
            let mut l = LAMBDA_MIN_NM;
            while l <= LAMBDA_MAX_NM {
                let n = m.substrate_index(axis, l).unwrap();
                assert!(n >= 1.0);
                assert!(n < prev, "{axis:?} not decreasing at {l}");
                assert!(m.increment(axis, l).unwrap() > 0.0);
                prev = n;
                l += 10.0;
            }
        }
    }

    #[test]
    fn z_axis_is_uncalibrated_and_follows_the_fit() {
        let m = DispersionModel::default();
        assert!(!m.is_calibrated(Axis::Z));
        let n = m.substrate_index(Axis::Z, 800.0).unwrap();
        assert_eq!(n, m.sellmeier_index(Axis::Z, 800.0));
        assert_eq!(m.increment(Axis::Z, 650.0).unwrap(), m.increment(Axis::X, 650.0).unwrap());
    }

    #[test]
    fn out_of_range_wavelength_is_a_domain_error() {
        let m = DispersionModel::default();
        assert!(matches!(m.substrate_index(Axis::X, 300.0), Err(Error::Domain { .. })));
        assert!(matches!(m.increment(Axis::Y, 1200.0), Err(Error::Domain { .. })));
    }
}
