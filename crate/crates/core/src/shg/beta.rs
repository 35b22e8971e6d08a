use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::process::ModeId;
use crate::materials::Polarization;
use crate::modes::ModeLabel;
use crate::{Error, Result, SPEED_OF_LIGHT_UM_PER_FS};

/// Angular frequency in rad/fs of a vacuum wavelength in nm.
pub fn omega_from_nm(lambda_nm: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT_UM_PER_FS / (lambda_nm * 1e-3)
}

/// Vacuum wavelength in nm of an angular frequency in rad/fs.
pub fn nm_from_omega(omega: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT_UM_PER_FS / omega * 1e3
}

/// Cubic least-squares fit of `β(ω)` for one mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaCurve {
    /// Frequencies the fit is valid over, rad/fs.
    pub omega_range: (f64, f64),
    center: f64,
    half_span: f64,
    /// Coefficients in `t = (ω - center)/half_span`, constant first.
    coeffs: [f64; 4],
    /// Root-mean-square fit residual, µm⁻¹.
    pub rms: f64,
}

impl BetaCurve {
    /// Fits `betas` (µm⁻¹) sampled at `omegas` (rad/fs). Needs four or more
    /// distinct frequencies.
    pub fn fit(omegas: &[f64], betas: &[f64]) -> Result<Self> {
        if omegas.len() != betas.len() || omegas.len() < 4 {
            return Err(Error::domain("BetaCurve::fit", "need at least four (ω, β) samples"));
        }
        let lo = omegas.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = omegas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(hi > lo) {
            return Err(Error::domain("BetaCurve::fit", "sample frequencies are not distinct"));
        }
        let center = 0.5 * (lo + hi);
        let half_span = 0.5 * (hi - lo);
        let n = omegas.len();
        let v = DMatrix::from_fn(n, 4, |i, k| ((omegas[i] - center) / half_span).powi(k as i32));
        let rhs = DVector::from_column_slice(betas);
        let sol = v
            .clone()
            .svd(true, true)
            .solve(&rhs, 1e-14)
            .map_err(|e| Error::numerical("shg", "BetaCurve::fit", e.to_string()))?;
        let coeffs = [sol[0], sol[1], sol[2], sol[3]];
        let resid = &v * &sol - rhs;
        Ok(Self {
            omega_range: (lo, hi),
            center,
            half_span,
            coeffs,
            rms: (resid.norm_squared() / n as f64).sqrt(),
        })
    }

    pub fn contains(&self, omega: f64) -> bool {
        let slack = 1e-9 * self.half_span.max(self.center.abs() * 1e-6);
        omega >= self.omega_range.0 - slack && omega <= self.omega_range.1 + slack
    }

    /// `β(ω)` without the range check.
    pub fn eval_unchecked(&self, omega: f64) -> f64 {
        let t = (omega - self.center) / self.half_span;
        let c = &self.coeffs;
        c[0] + t * (c[1] + t * (c[2] + t * c[3]))
    }

    pub fn eval(&self, omega: f64) -> Result<f64> {
        if !self.contains(omega) {
            return Err(Error::domain(
                "BetaCurve::eval",
                format!(
                    "ω = {omega:.6} rad/fs outside table range [{:.6}, {:.6}]",
                    self.omega_range.0, self.omega_range.1
                ),
            ));
        }
        Ok(self.eval_unchecked(omega))
    }

    /// `dβ/dω`, fs/µm.
    pub fn derivative(&self, omega: f64) -> f64 {
        let t = (omega - self.center) / self.half_span;
        let c = &self.coeffs;
        (c[1] + t * (2.0 * c[2] + t * 3.0 * c[3])) / self.half_span
    }
}

/// `β(ω)` curves of one polarization family over one band, keyed by label.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BetaTable {
    pub curves: BTreeMap<ModeLabel, BetaCurve>,
}

impl BetaTable {
    /// Fits one curve per label seen at every sample. `samples[k]` lists
    /// `(label, β)` at `omegas[k]`; labels missing from any sample are dropped
    /// and a repeated label keeps its highest `β`.
    pub fn from_samples(omegas: &[f64], samples: &[Vec<(ModeLabel, f64)>]) -> Result<Self> {
        if omegas.len() != samples.len() {
            return Err(Error::domain("BetaTable::from_samples", "one sample list per frequency required"));
        }
        let per: Vec<BTreeMap<ModeLabel, f64>> = samples
            .iter()
            .map(|s| {
                let mut m = BTreeMap::new();
                for &(l, b) in s {
                    let e = m.entry(l).or_insert(b);
                    if b > *e {
                        *e = b;
                    }
                }
                m
            })
            .collect();
        let mut curves = BTreeMap::new();
        let Some(first) = per.first() else {
            return Ok(Self { curves });
        };
        for &label in first.keys() {
            let betas: Option<Vec<f64>> = per.iter().map(|m| m.get(&label).copied()).collect();
            match betas {
                Some(b) => {
                    curves.insert(label, BetaCurve::fit(omegas, &b)?);
                }
                None => tracing::debug!(target: "shg", %label, "label not present at every sample, dropped"),
            }
        }
        Ok(Self { curves })
    }

    pub fn curve(&self, label: ModeLabel) -> Option<&BetaCurve> {
        self.curves.get(&label)
    }

    pub fn beta(&self, label: ModeLabel, omega: f64) -> Result<f64> {
        self.curves
            .get(&label)
            .ok_or_else(|| Error::domain("BetaTable::beta", format!("no β table for mode {label}")))?
            .eval(omega)
    }

    pub fn labels(&self) -> Vec<ModeLabel> {
        self.curves.keys().copied().collect()
    }
}

/// Pump-band and SH-band tables for both polarizations.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BetaTables {
    pub pump: BTreeMap<Polarization, BetaTable>,
    pub sh: BTreeMap<Polarization, BetaTable>,
}

impl BetaTables {
    fn lookup(map: &BTreeMap<Polarization, BetaTable>, id: ModeId, omega: f64) -> Result<f64> {
        map.get(&id.polarization)
            .ok_or_else(|| Error::domain("BetaTables", format!("no {} table", id.polarization)))?
            .beta(id.label, omega)
    }

    /// `β` of a pump-band mode, µm⁻¹.
    pub fn pump_beta(&self, id: ModeId, omega: f64) -> Result<f64> {
        Self::lookup(&self.pump, id, omega)
    }

    /// `β` of an SH-band mode, µm⁻¹.
    pub fn sh_beta(&self, id: ModeId, omega: f64) -> Result<f64> {
        Self::lookup(&self.sh, id, omega)
    }

    pub fn pump_curve(&self, id: ModeId) -> Option<&BetaCurve> {
        self.pump.get(&id.polarization)?.curve(id.label)
    }

    pub fn sh_curve(&self, id: ModeId) -> Option<&BetaCurve> {
        self.sh.get(&id.polarization)?.curve(id.label)
    }
}
