use num_complex::Complex64;

use super::matching::find_phase_matched_wavelength;
use crate::materials::{Polarization, ShgType, Waveguide};
use crate::modes::ModeSolver;
use crate::shg::{BandPlan, Device, ModalBasis, ProcessTriple, PumpSpec};
use crate::{Error, Result};

/// Relative `|D|` below which a process is treated as forbidden.
pub const OVERLAP_THRESHOLD: f64 = 1e-3;

/// A device, how to solve its modes and which band to tabulate.
#[derive(Debug, Clone, Default)]
pub struct Study {
    pub solver: ModeSolver,
    pub device: Device,
    pub plan: BandPlan,
}

fn polarizations(types: &[ShgType]) -> (Vec<Polarization>, Vec<Polarization>) {
    let mut pump = Vec::new();
    let mut sh = Vec::new();
    for t in types {
        let (b, c) = t.pump_polarizations();
        for p in [b, c] {
            if !pump.contains(&p) {
                pump.push(p);
            }
        }
        if !sh.contains(&t.sh_polarization()) {
            sh.push(t.sh_polarization());
        }
    }
    pump.sort();
    sh.sort();
    (pump, sh)
}

impl Study {
    pub fn new(solver: ModeSolver, device: Device, plan: BandPlan) -> Self {
        Self { solver, device, plan }
    }

    /// Same study with the pump band set to the pump's spectral support.
    pub fn for_pump(&self, pump: &PumpSpec) -> Self {
        let mut s = self.clone();
        s.plan.pump_band_nm = pump.band_nm();
        s
    }

    /// Modes of `wg` for the polarizations the given process types need.
    pub fn basis_on(&self, wg: &Waveguide, types: &[ShgType]) -> Result<ModalBasis> {
        let (pump, sh) = polarizations(types);
        ModalBasis::solve(&self.solver, wg, &self.plan, &pump, &sh)
    }

    pub fn basis(&self, types: &[ShgType]) -> Result<ModalBasis> {
        self.basis_on(&self.device.waveguide, types)
    }
}

/// Triples of `shg_type` through `harmonic` with `|D| ≥ threshold · max|D|`,
/// strongest first, with their overlaps.
pub fn allowed_processes(
    basis: &ModalBasis,
    device: &Device,
    shg_type: ShgType,
    harmonic: u32,
    threshold: f64,
) -> Result<Vec<(ProcessTriple, Complex64)>> {
    let mut all: Vec<(ProcessTriple, Complex64)> = basis
        .enumerate(shg_type, harmonic)
        .into_iter()
        .map(|t| Ok((t, basis.overlap(&t, device)?.value)))
        .collect::<Result<_>>()?;
    let max = all.iter().map(|(_, d)| d.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::domain("allowed_processes", format!("every type {shg_type} overlap vanishes")));
    }
    all.retain(|(_, d)| d.norm() >= threshold * max);
    all.sort_by(|a, b| b.1.norm().total_cmp(&a.1.norm()));
    Ok(all)
}

/// Keeps processes with a phase-matching root inside `bracket_nm`.
pub fn matchable_in(
    basis: &ModalBasis,
    device: &Device,
    processes: Vec<(ProcessTriple, Complex64)>,
    bracket_nm: (f64, f64),
) -> Vec<(ProcessTriple, Complex64, f64)> {
    processes
        .into_iter()
        .filter_map(|(t, d)| {
            find_phase_matched_wavelength(&t, &basis.tables, &device.poling, Some(bracket_nm))
                .ok()
                .filter(|pm| !pm.degenerate)
                .map(|pm| (t, d, pm.lambda2_nm))
        })
        .collect()
}
