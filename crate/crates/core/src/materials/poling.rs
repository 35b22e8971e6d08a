use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Periodic domain inversion along the propagation axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolingSpec {
    pub period_um: f64,
    /// Fraction of each period with the unflipped sign.
    pub duty: f64,
    /// Harmonics considered when enumerating processes.
    pub harmonic_orders: Vec<u32>,
}

impl Default for PolingSpec {
    fn default() -> Self {
        Self {
            period_um: 7.62,
            duty: 0.5,
            harmonic_orders: vec![1, 2, 3],
        }
    }
}

impl PolingSpec {
    pub fn new(period_um: f64, duty: f64) -> Result<Self> {
        let p = Self {
            period_um,
            duty,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period_um > 0.0 && self.period_um.is_finite()) {
            return Err(Error::Config(format!("poling period must be > 0, got {}", self.period_um)));
        }
        if !(self.duty > 0.0 && self.duty < 1.0) {
            return Err(Error::Config(format!("duty cycle must lie in (0, 1), got {}", self.duty)));
        }
        if self.harmonic_orders.contains(&0) {
            return Err(Error::Config("harmonic orders must be >= 1".into()));
        }
        Ok(())
    }

    pub fn with_period(&self, period_um: f64) -> Self {
        Self {
            period_um,
            ..self.clone()
        }
    }

    /// Grating wavevector `2πM/Λ`, µm⁻¹.
    pub fn grating_wavevector(&self, order: u32) -> f64 {
        2.0 * PI * order as f64 / self.period_um
    }

    pub fn harmonic_amplitude(&self, order: u32) -> Result<f64> {
        poling_harmonic_amplitude(order, self.duty)
    }
}

/// Fourier amplitude `|d_M| = 2|sin(πMD)|/(πM)` of a ±1 square wave with duty `D`.
/// Exactly zero whenever `MD` is an integer.
pub fn poling_harmonic_amplitude(order: u32, duty: f64) -> Result<f64> {
    if order == 0 {
        return Err(Error::domain("poling_harmonic_amplitude", "harmonic order must be >= 1"));
    }
    if !(duty > 0.0 && duty < 1.0) {
        return Err(Error::domain(
            "poling_harmonic_amplitude",
            format!("duty cycle must lie in (0, 1), got {duty}"),
        ));
    }
    let m = order as f64;
    let md = m * duty;
    let frac = md - md.round();
    if frac.abs() < 1e-12 {
        return Ok(0.0);
    }
    Ok(2.0 * (PI * frac).sin().abs() / (PI * m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_half_duty() {
        assert!((poling_harmonic_amplitude(1, 0.5).unwrap() - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn even_orders_vanish_at_half_duty() {
        for m in [2, 4, 6, 100] {
            assert_eq!(poling_harmonic_amplitude(m, 0.5).unwrap(), 0.0);
        }
        assert_eq!(poling_harmonic_amplitude(4, 0.25).unwrap(), 0.0);
    }

    #[test]
    fn third_order_half_duty() {
        assert!((poling_harmonic_amplitude(3, 0.5).unwrap() - 2.0 / (3.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn duty_symmetry() {
        for m in 1..12 {
            for d in [0.1, 0.3, 0.37, 0.75] {
                let a = poling_harmonic_amplitude(m, d).unwrap();
                let b = poling_harmonic_amplitude(m, 1.0 - d).unwrap();
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(poling_harmonic_amplitude(0, 0.5).is_err());
        assert!(poling_harmonic_amplitude(1, 0.0).is_err());
        assert!(poling_harmonic_amplitude(1, 1.0).is_err());
        assert!(PolingSpec::new(-1.0, 0.5).is_err());
    }
}
