use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matching::find_phase_matched_wavelength;
use super::study::{allowed_processes, matchable_in, Study, OVERLAP_THRESHOLD};
use crate::materials::{ShgType, Waveguide};
use crate::shg::{broaden, sh_spectrum, ModalBasis, ProcessTriple, PumpSpec, Spectrum, SpectrumOptions};
use crate::{Error, Result};

/// Device parameter varied by a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanParam {
    /// Channel width `w`, µm.
    Width,
    /// Diffusion depth `h`, µm.
    Depth,
    /// Poling period `Λ`, µm.
    Period,
}

impl ScanParam {
    pub fn nominal(self, study: &Study) -> f64 {
        let g = &study.device.waveguide.geometry;
        match self {
            ScanParam::Width => g.width_um,
            ScanParam::Depth => g.depth_um,
            ScanParam::Period => study.device.poling.period_um,
        }
    }

    /// The nominal waveguide with this parameter set to `value`; the period
    /// leaves the waveguide alone.
    pub fn waveguide(self, study: &Study, value: f64) -> Waveguide {
        let wg = &study.device.waveguide;
        match self {
            ScanParam::Width => wg.with_geometry(wg.geometry.with_width(value)),
            ScanParam::Depth => wg.with_geometry(wg.geometry.with_depth(value)),
            ScanParam::Period => wg.clone(),
        }
    }
}

impl fmt::Display for ScanParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanParam::Width => "w",
            ScanParam::Depth => "h",
            ScanParam::Period => "period",
        })
    }
}

impl std::str::FromStr for ScanParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "w" | "width" => Ok(ScanParam::Width),
            "h" | "depth" => Ok(ScanParam::Depth),
            "period" | "lambda_pm" | "poling_period" => Ok(ScanParam::Period),
            other => Err(Error::domain("ScanParam::from_str", format!("unknown scan parameter {other:?}"))),
        }
    }
}

/// Phase-matched SH wavelength of each process against one parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub param: ScanParam,
    pub values: Vec<f64>,
    pub nominal: f64,
    pub triples: Vec<ProcessTriple>,
    /// `λ₂*` at the nominal point, per triple.
    pub nominal_lambda2_nm: Vec<Option<f64>>,
    /// `λ₂*` per triple per sample; `None` where the process was lost.
    pub lambda2_nm: Vec<Vec<Option<f64>>>,
    /// Some sample lost a mode or its root.
    pub truncated: Vec<bool>,
    /// `dλ₂*/dparam` at the nominal point, nm per µm.
    pub slope: Vec<Option<f64>>,
}

impl ScanResult {
    /// `λ₂* − λ₂*(nominal)` per sample.
    pub fn shifts(&self, t: usize) -> Vec<Option<f64>> {
        let n0 = self.nominal_lambda2_nm[t];
        self.lambda2_nm[t].iter().map(|v| Some((*v)? - n0?)).collect()
    }

    /// Largest minus smallest `λ₂*` over the samples where it exists.
    pub fn spread(&self, t: usize) -> Option<f64> {
        let v: Vec<f64> = self.lambda2_nm[t].iter().flatten().copied().collect();
        if v.len() < 2 {
            return None;
        }
        Some(v.iter().copied().fold(f64::NEG_INFINITY, f64::max) - v.iter().copied().fold(f64::INFINITY, f64::min))
    }

    /// Long format: `param, value, triple, dlambda2_nm`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["param", "value", "triple", "dlambda2_nm"]).map_err(crate::shg::csv_err)?;
        for (t, triple) in self.triples.iter().enumerate() {
            for (v, s) in self.values.iter().zip(self.shifts(t)) {
                let shift = s.map(|x| format!("{x:.6}")).unwrap_or_default();
                w.write_record([self.param.to_string(), format!("{v}"), triple.to_string(), shift])
                    .map_err(crate::shg::csv_err)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn check_grid(values: &[f64], nominal: f64) -> Result<()> {
    if values.len() < 2 || values.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::domain("sensitivity_scan", "sample grid must hold two or more strictly increasing values"));
    }
    let tol = 1e-9 * nominal.abs().max(1.0);
    if nominal < values[0] - tol || nominal > values[values.len() - 1] + tol {
        return Err(Error::domain(
            "sensitivity_scan",
            format!("range [{}, {}] does not contain the nominal value {nominal}", values[0], values[values.len() - 1]),
        ));
    }
    Ok(())
}

fn types_of(triples: &[ProcessTriple]) -> Vec<ShgType> {
    let mut v: Vec<ShgType> = Vec::new();
    for t in triples {
        if !v.contains(&t.shg_type) {
            v.push(t.shg_type);
        }
    }
    v
}

fn roots(basis: &ModalBasis, study: &Study, period: f64, triples: &[ProcessTriple]) -> Vec<Option<f64>> {
    let poling = study.device.poling.with_period(period);
    triples
        .iter()
        .map(|t| {
            find_phase_matched_wavelength(t, &basis.tables, &poling, None)
                .ok()
                .filter(|pm| !pm.degenerate)
                .map(|pm| pm.lambda2_nm)
        })
        .collect()
}

/// Re-solves `λ₂*` of each triple at every parameter value. Geometry scans
/// re-solve the modes per sample; period scans reuse the nominal tables.
pub fn sensitivity_scan(study: &Study, param: ScanParam, values: &[f64], triples: &[ProcessTriple]) -> Result<ScanResult> {
    let nominal = param.nominal(study);
    check_grid(values, nominal)?;
    let types = types_of(triples);
    let period0 = study.device.poling.period_um;

    let (per_sample, nominal_roots): (Vec<Vec<Option<f64>>>, Vec<Option<f64>>) = match param {
        ScanParam::Period => {
            let basis = study.basis(&types)?;
            let rows = values.iter().map(|&p| roots(&basis, study, p, triples)).collect();
            (rows, roots(&basis, study, period0, triples))
        }
        ScanParam::Width | ScanParam::Depth => {
            let nominal_pos = values.iter().position(|&v| (v - nominal).abs() <= 1e-9 * nominal.abs().max(1.0));
            let mut pts: Vec<f64> = values.to_vec();
            if nominal_pos.is_none() {
                pts.push(nominal);
            }
            let mut rows: Vec<Vec<Option<f64>>> = pts
                .par_iter()
                .map(|&v| -> Result<Vec<Option<f64>>> {
                    let wg = param.waveguide(study, v);
                    wg.validate()?;
                    match study.basis_on(&wg, &types) {
                        Ok(b) => Ok(roots(&b, study, period0, triples)),
                        Err(e @ Error::Numerical { .. }) => Err(e),
                        Err(e) => {
                            tracing::warn!(target: "scan", %param, value = v, error = %e, "sample lost");
                            Ok(vec![None; triples.len()])
                        }
                    }
                })
                .collect::<Result<_>>()?;
            let nom = match nominal_pos {
                Some(i) => rows[i].clone(),
                None => rows.pop().expect("nominal appended"),
            };
            (rows, nom)
        }
    };

    let n = values.len();
    let i0 = (0..n).fold(0, |b, i| if (values[i] - nominal).abs() < (values[b] - nominal).abs() { i } else { b });
    let mut lambda2 = vec![vec![None; n]; triples.len()];
    for (i, row) in per_sample.iter().enumerate() {
        for (t, v) in row.iter().enumerate() {
            lambda2[t][i] = *v;
        }
    }
    let slope = lambda2
        .iter()
        .map(|row| {
            let (l, r) = (i0.saturating_sub(1), (i0 + 1).min(n - 1));
            let pick = |a: usize, b: usize| Some((row[b]? - row[a]?) / (values[b] - values[a]));
            pick(l, r).or_else(|| pick(i0, r)).or_else(|| pick(l, i0))
        })
        .collect();
    let truncated = lambda2.iter().map(|row| row.iter().any(Option::is_none)).collect();
    Ok(ScanResult {
        param,
        values: values.to_vec(),
        nominal,
        triples: triples.to_vec(),
        nominal_lambda2_nm: nominal_roots,
        lambda2_nm: lambda2,
        truncated,
        slope,
    })
}

/// Ideal and broadened spectra of one geometry sample.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySpectrum {
    pub param: ScanParam,
    pub value: f64,
    pub ideal: Spectrum,
    pub broadened: Spectrum,
}

/// Full type II SH spectrum at each value of a geometry parameter. Processes
/// are those above the overlap threshold whose root lies on the grid.
pub fn spectrum_vs_geometry(
    study: &Study,
    param: ScanParam,
    values: &[f64],
    pump: &PumpSpec,
    lambda2_nm: &[f64],
    opts: &SpectrumOptions,
    broadening_nm: f64,
) -> Result<Vec<GeometrySpectrum>> {
    if param == ScanParam::Period {
        return Err(Error::domain("spectrum_vs_geometry", "period is not a geometry parameter"));
    }
    let (lo, hi) = match (lambda2_nm.first(), lambda2_nm.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        _ => return Err(Error::domain("spectrum_vs_geometry", "wavelength grid must be increasing")),
    };
    let study = study.for_pump(pump);
    values
        .iter()
        .map(|&v| {
            let wg = param.waveguide(&study, v);
            let basis = study.basis_on(&wg, &[ShgType::TypeII])?;
            let device = crate::shg::Device {
                waveguide: wg,
                ..study.device.clone()
            };
            let allowed = allowed_processes(&basis, &device, ShgType::TypeII, 1, OVERLAP_THRESHOLD)?;
            let matched: Vec<ProcessTriple> =
                matchable_in(&basis, &device, allowed, (lo, hi)).into_iter().map(|(t, _, _)| t).collect();
            let model = basis.model(&matched, &device)?;
            let ideal = sh_spectrum(&model, pump, lambda2_nm, opts)?;
            let broadened = broaden(&ideal, broadening_nm)?;
            Ok(GeometrySpectrum {
                param,
                value: v,
                ideal,
                broadened,
            })
        })
        .collect()
}
