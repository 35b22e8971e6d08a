use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::beta::{omega_from_nm, BetaTable, BetaTables};
use super::overlap::{overlap_coefficient, Overlap};
use super::process::{Device, ModeId, ProcessTriple};
use super::spectrum::{Process, ShgModel};
use crate::materials::{Polarization, ShgType, Waveguide};
use crate::modes::{GuidedMode, ModeSet, ModeSolver};
use crate::{Error, Result};

/// Wavelength sampling of the pump band; the SH band is its half-wavelength
/// image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BandPlan {
    pub pump_band_nm: (f64, f64),
    /// Odd, at least 5, so the band center is a sample.
    pub samples: usize,
    /// Solve only this many highest-`β` pump modes per polarization.
    pub pump_count: Option<usize>,
    /// Solve only this many highest-`β` SH modes per polarization.
    pub sh_count: Option<usize>,
}

impl Default for BandPlan {
    fn default() -> Self {
        Self {
            pump_band_nm: (785.0, 815.0),
            samples: 7,
            pump_count: None,
            sh_count: None,
        }
    }
}

impl BandPlan {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.pump_band_nm;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::Config(format!("pump band ({lo}, {hi}) nm is empty")));
        }
        if self.samples < 5 || self.samples.is_multiple_of(2) {
            return Err(Error::Config(format!("band samples must be odd and >= 5, got {}", self.samples)));
        }
        if self.sh_count == Some(0) || self.pump_count == Some(0) {
            return Err(Error::Config("mode counts must be >= 1".into()));
        }
        Ok(())
    }

    /// Pump sample wavelengths, shortest first.
    pub fn pump_wavelengths(&self) -> Vec<f64> {
        let (lo, hi) = self.pump_band_nm;
        let n = self.samples;
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    pub fn center_nm(&self) -> f64 {
        self.pump_wavelengths()[self.samples / 2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Band {
    Pump,
    Sh,
}

/// Modes of a device over a pump band and its SH image: `β` tables for every
/// label seen at all samples, plus full fields at the band center and at the
/// short-wavelength edge.
#[derive(Debug, Clone)]
pub struct ModalBasis {
    pub plan: BandPlan,
    pub tables: BetaTables,
    pub pump: BTreeMap<Polarization, ModeSet>,
    pub sh: BTreeMap<Polarization, ModeSet>,
    pub pump_edge: BTreeMap<Polarization, ModeSet>,
    pub sh_edge: BTreeMap<Polarization, ModeSet>,
}

impl ModalBasis {
    /// Solves `pump_pols` over the pump band and `sh_pols` over the SH band.
    pub fn solve(
        solver: &ModeSolver,
        wg: &Waveguide,
        plan: &BandPlan,
        pump_pols: &[Polarization],
        sh_pols: &[Polarization],
    ) -> Result<Self> {
        plan.validate()?;
        let mesh = solver.mesh(wg)?;
        let lams = plan.pump_wavelengths();
        let center = plan.samples / 2;
        let mut jobs: Vec<(Band, Polarization, usize)> = Vec::new();
        for &p in pump_pols {
            jobs.extend((0..lams.len()).map(|k| (Band::Pump, p, k)));
        }
        for &p in sh_pols {
            jobs.extend((0..lams.len()).map(|k| (Band::Sh, p, k)));
        }
        let sets: Vec<ModeSet> = jobs
            .par_iter()
            .map(|&(band, pol, k)| match band {
                Band::Pump => solver.solve_on(mesh.clone(), wg, lams[k], pol, plan.pump_count),
                Band::Sh => solver.solve_on(mesh.clone(), wg, 0.5 * lams[k], pol, plan.sh_count),
            })
            .collect::<Result<_>>()?;

        let mut tables = BetaTables::default();
        let mut basis_sets: [BTreeMap<Polarization, ModeSet>; 4] = Default::default();
        let mut k = 0;
        for (band, pols) in [(Band::Pump, pump_pols), (Band::Sh, sh_pols)] {
            for &pol in pols {
                let chunk = &sets[k..k + lams.len()];
                k += lams.len();
                let omegas: Vec<f64> = chunk.iter().map(|s| omega_from_nm(s.lambda_nm)).collect();
                let samples: Vec<Vec<_>> = chunk
                    .iter()
                    .map(|s| s.modes.iter().map(|m| (m.label, m.beta)).collect())
                    .collect();
                let table = BetaTable::from_samples(&omegas, &samples)?;
                let (target, c, e) = match band {
                    Band::Pump => (&mut tables.pump, 0, 2),
                    Band::Sh => (&mut tables.sh, 1, 3),
                };
                target.insert(pol, table);
                basis_sets[c].insert(pol, chunk[center].clone());
                basis_sets[e].insert(pol, chunk[0].clone());
            }
        }
        let [pump, sh, pump_edge, sh_edge] = basis_sets;
        Ok(Self {
            plan: *plan,
            tables,
            pump,
            sh,
            pump_edge,
            sh_edge,
        })
    }

    fn find(sets: &BTreeMap<Polarization, ModeSet>, id: ModeId) -> Result<&GuidedMode> {
        sets.get(&id.polarization)
            .and_then(|s| s.find(id.label))
            .ok_or_else(|| Error::domain("ModalBasis", format!("mode {id} is not guided or was not solved")))
    }

    pub fn pump_mode(&self, id: ModeId) -> Result<&GuidedMode> {
        Self::find(&self.pump, id)
    }

    pub fn sh_mode(&self, id: ModeId) -> Result<&GuidedMode> {
        Self::find(&self.sh, id)
    }

    /// Whether all three modes of `triple` have `β` tables.
    pub fn covers(&self, triple: &ProcessTriple) -> bool {
        let (b, c) = triple.pump_modes();
        self.tables.sh_curve(triple.sh_mode()).is_some()
            && self.tables.pump_curve(b).is_some()
            && self.tables.pump_curve(c).is_some()
    }

    /// `D` from the band-center fields.
    pub fn overlap(&self, triple: &ProcessTriple, device: &Device) -> Result<Overlap> {
        let (b, c) = triple.pump_modes();
        overlap_coefficient(
            triple,
            self.sh_mode(triple.sh_mode())?,
            self.pump_mode(b)?,
            self.pump_mode(c)?,
            &device.tensor,
            &device.poling,
        )
    }

    /// `|D_edge − D_center| / |D_center|` with `D_edge` from the short-wavelength
    /// band edge.
    pub fn overlap_drift(&self, triple: &ProcessTriple, device: &Device) -> Result<f64> {
        let (b, c) = triple.pump_modes();
        let d0 = self.overlap(triple, device)?.value;
        let d1 = overlap_coefficient(
            triple,
            Self::find(&self.sh_edge, triple.sh_mode())?,
            Self::find(&self.pump_edge, b)?,
            Self::find(&self.pump_edge, c)?,
            &device.tensor,
            &device.poling,
        )?
        .value;
        if d0.norm() == 0.0 {
            return Ok(if d1.norm() == 0.0 { 0.0 } else { f64::INFINITY });
        }
        Ok((d1 - d0).norm() / d0.norm())
    }

    /// Every triple of `shg_type` through harmonic `harmonic` whose modes all
    /// have `β` tables, ordered by pump and SH labels.
    pub fn enumerate(&self, shg_type: ShgType, harmonic: u32) -> Vec<ProcessTriple> {
        let (pb, pc) = shg_type.pump_polarizations();
        let labels = |m: &BTreeMap<Polarization, BetaTable>, p: Polarization| {
            m.get(&p).map(|t| t.labels()).unwrap_or_default()
        };
        let mut out = Vec::new();
        for b in labels(&self.tables.pump, pb) {
            for c in labels(&self.tables.pump, pc) {
                for a in labels(&self.tables.sh, shg_type.sh_polarization()) {
                    out.push(ProcessTriple {
                        shg_type,
                        sh: a,
                        pump_b: b,
                        pump_c: c,
                        harmonic,
                    });
                }
            }
        }
        out
    }

    /// Computes `D` for each triple and packages the spectrum model.
    pub fn model(&self, triples: &[ProcessTriple], device: &Device) -> Result<ShgModel> {
        let processes = triples
            .par_iter()
            .map(|t| {
                Ok(Process {
                    triple: *t,
                    overlap: self.overlap(t, device)?.value,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ShgModel::new(self.tables.clone(), processes, device.poling.clone(), device.length_um())
    }
}
