use std::io::Write;

use serde::{Deserialize, Serialize};

use super::study::{allowed_processes, matchable_in, Study, OVERLAP_THRESHOLD};
use crate::materials::ShgType;
use crate::shg::{
    integrate, sh_spectrum, Device, ModalBasis, ModeId, ProcessTriple, PumpSpec, Spectrum, SpectrumOptions,
};
use crate::{Error, Result};

/// How a line's strength is read off its own spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelativePowerMetric {
    /// Maximum spectral intensity of the line.
    #[default]
    PeakIntensity,
    /// Area under the line.
    IntegratedIntensity,
    /// Square root of the peak intensity.
    PeakAmplitude,
}

impl RelativePowerMetric {
    fn measure(self, x: &[f64], y: &[f64]) -> f64 {
        let peak = y.iter().copied().fold(0.0, f64::max);
        match self {
            RelativePowerMetric::PeakIntensity => peak,
            RelativePowerMetric::IntegratedIntensity => integrate(x, y),
            RelativePowerMetric::PeakAmplitude => peak.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub triple: ProcessTriple,
    /// Degenerate-pump phase-matching wavelength, nm.
    pub lambda2_nm: f64,
    /// Strength relative to the strongest line.
    pub rel_power: f64,
    /// `|D|`, same units as the overlap.
    pub overlap_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessTable {
    pub rows: Vec<TableRow>,
    pub metric: RelativePowerMetric,
    pub spectrum: Spectrum,
}

impl ProcessTable {
    pub fn find(&self, modes: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.triple.modes_string() == modes)
    }

    /// Columns `triple, lambda2_nm, rel_power`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["triple", "lambda2_nm", "rel_power"]).map_err(crate::shg::csv_err)?;
        for r in &self.rows {
            w.write_record([r.triple.modes_string(), format!("{:.3}", r.lambda2_nm), format!("{:.4}", r.rel_power)])
                .map_err(crate::shg::csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Type II processes of the device under equal excitation of every guided
/// pump mode: each allowed triple with a root on the grid, its `λ₂*` and its
/// line strength relative to the strongest. `pump` supplies the spectrum;
/// its modal table is replaced by the uniform one.
pub fn process_table(
    study: &Study,
    pump: &PumpSpec,
    lambda2_nm: &[f64],
    metric: RelativePowerMetric,
    opts: &SpectrumOptions,
) -> Result<ProcessTable> {
    let study = study.for_pump(pump);
    let basis = study.basis(&[ShgType::TypeII])?;
    process_table_on(&basis, &study.device, pump, lambda2_nm, metric, opts)
}

/// [`process_table`] on modes already solved over the pump support.
pub fn process_table_on(
    basis: &ModalBasis,
    device: &Device,
    pump: &PumpSpec,
    lambda2_nm: &[f64],
    metric: RelativePowerMetric,
    opts: &SpectrumOptions,
) -> Result<ProcessTable> {
    let (lo, hi) = match (lambda2_nm.first(), lambda2_nm.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        _ => return Err(Error::domain("process_table", "wavelength grid must be increasing")),
    };
    let pump_modes: Vec<ModeId> = basis
        .pump
        .values()
        .flat_map(|set| set.modes.iter().map(|m| ModeId::new(m.polarization, m.label)))
        .filter(|id| basis.tables.pump_curve(*id).is_some())
        .collect();
    let pump = pump.clone().with_uniform_modes(pump_modes);

    let allowed = allowed_processes(basis, device, ShgType::TypeII, 1, OVERLAP_THRESHOLD)?;
    let matched = matchable_in(basis, device, allowed, (lo, hi));
    if matched.is_empty() {
        return Err(Error::NotPhaseMatchable { lo_nm: lo, hi_nm: hi });
    }
    let triples: Vec<ProcessTriple> = matched.iter().map(|m| m.0).collect();
    let model = basis.model(&triples, device)?;
    let spectrum = sh_spectrum(&model, &pump, lambda2_nm, opts)?;

    let strengths: Vec<f64> =
        spectrum.contributions.iter().map(|c| metric.measure(&spectrum.lambda2_nm, c)).collect();
    let top = strengths.iter().copied().fold(0.0, f64::max);
    if !(top > 0.0) {
        return Err(Error::numerical("scan", "process_table", "every line has zero strength"));
    }
    let mut rows: Vec<TableRow> = matched
        .iter()
        .zip(&strengths)
        .map(|(&(triple, d, l2), &s)| TableRow {
            triple,
            lambda2_nm: l2,
            rel_power: s / top,
            overlap_abs: d.norm(),
        })
        .collect();
    rows.sort_by(|a, b| b.rel_power.total_cmp(&a.rel_power));
    Ok(ProcessTable {
        rows,
        metric,
        spectrum,
    })
}
