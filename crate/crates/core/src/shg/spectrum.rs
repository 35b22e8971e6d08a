use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::beta::{omega_from_nm, BetaTables};
use super::overlap::{coupling_gamma, phase_mismatch};
use super::process::{ModeId, ProcessTriple};
use super::pump::PumpSpec;
use crate::materials::PolingSpec;
use crate::{Error, Result, SPEED_OF_LIGHT_UM_PER_FS};

/// A process ready for spectrum synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Process {
    pub triple: ProcessTriple,
    /// Effective nonlinear coefficient `D`, held fixed over the band.
    pub overlap: Complex64,
}

/// Everything the spectrum needs once modes are solved: dispersion tables,
/// processes with their overlaps, poling and length.
#[derive(Debug, Clone, PartialEq)]
pub struct ShgModel {
    pub tables: BetaTables,
    pub processes: Vec<Process>,
    pub poling: PolingSpec,
    pub length_um: f64,
}

impl ShgModel {
    pub fn new(tables: BetaTables, processes: Vec<Process>, poling: PolingSpec, length_um: f64) -> Result<Self> {
        if !(length_um > 0.0) {
            return Err(Error::domain("ShgModel::new", format!("length must be > 0, got {length_um}")));
        }
        Ok(Self {
            tables,
            processes,
            poling,
            length_um,
        })
    }

    /// SH modes fed by at least one process, in first-seen order.
    pub fn sh_modes(&self) -> Vec<ModeId> {
        let mut out: Vec<ModeId> = Vec::new();
        for p in &self.processes {
            let id = p.triple.sh_mode();
            if !out.contains(&id) {
                out.push(id);
            }
        }
        out
    }

    pub fn with_poling(&self, poling: PolingSpec) -> Self {
        Self {
            poling,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaModel {
    /// `Γ` from the phase mismatch.
    #[default]
    Phase,
    /// `Γ = L` everywhere: perfect phase matching over the band.
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumOptions {
    /// Trapezoid nodes over the pump support, at least 512.
    pub pump_points: usize,
    pub gamma: GammaModel,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            pump_points: 1024,
            gamma: GammaModel::Phase,
        }
    }
}

impl SpectrumOptions {
    pub fn validate(&self) -> Result<()> {
        if self.pump_points < 512 {
            return Err(Error::Config(format!("pump_points must be >= 512, got {}", self.pump_points)));
        }
        Ok(())
    }
}

/// SH output on a wavelength grid.
///
/// For unbroadened spectra `intensity[i] = Σ_ak |amplitudes[ak][i]|²`. After
/// [`broaden`] the amplitudes are dropped and only intensities remain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub lambda2_nm: Vec<f64>,
    pub sh_modes: Vec<ModeId>,
    /// Per SH mode, per grid point.
    pub amplitudes: Vec<Vec<Complex64>>,
    pub intensity: Vec<f64>,
    pub triples: Vec<ProcessTriple>,
    /// `|E|²` each process would give on its own, per grid point.
    pub contributions: Vec<Vec<f64>>,
    /// FWHM of the Gaussian already convolved in, nm.
    pub broadening_nm: f64,
}

/// Quadrature nodes and trapezoid weights over `[lo, hi]`.
fn trapezoid(lo: f64, hi: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = (hi - lo) / (n - 1) as f64;
    let nodes = (0..n).map(|k| lo + k as f64 * h).collect();
    let weights = (0..n).map(|k| if k == 0 || k == n - 1 { 0.5 * h } else { h }).collect();
    (nodes, weights)
}

/// Pulsed SH spectrum in the undepleted-pump limit:
///
/// `E_ak(L, ω₂) = (i ω₂²/(c² β_ak²)) Σ ∫ dω₁ D Γ(Δβ) E_bl(0, ω₁) E_cm(0, ω₂ − ω₁)`
///
/// summed over the model's processes feeding SH mode `ak`. Type II terms are
/// counted twice for the two pump orderings.
pub fn sh_spectrum(model: &ShgModel, pump: &PumpSpec, lambda2_nm: &[f64], opts: &SpectrumOptions) -> Result<Spectrum> {
    pump.validate()?;
    if lambda2_nm.is_empty() {
        return Err(Error::domain("sh_spectrum", "empty wavelength grid"));
    }
    opts.validate()?;
    let n = opts.pump_points;
    let (lo, hi) = pump.support();
    if !(hi > lo) {
        return Err(Error::domain("sh_spectrum", "pump support is empty after filtering"));
    }
    let (nodes, weights) = trapezoid(lo, hi, n);
    if pump.filter_nm.is_none() {
        let kept: f64 = nodes.iter().zip(&weights).map(|(&w, q)| q * pump.envelope(w).powi(2)).sum();
        if (1.0 - kept).abs() > 1e-3 {
            tracing::warn!(target: "shg", kept, "pump grid misses more than 0.1% of the pump energy");
        }
    }
    let sh_modes = model.sh_modes();
    let triples: Vec<ProcessTriple> = model.processes.iter().map(|p| p.triple).collect();
    let mode_of: Vec<usize> = triples
        .iter()
        .map(|t| sh_modes.iter().position(|&m| m == t.sh_mode()).expect("listed"))
        .collect();
    for id in &sh_modes {
        if model.tables.sh_curve(*id).is_none() {
            return Err(Error::domain("sh_spectrum", format!("no β table for SH mode {id}")));
        }
    }
    let l = model.length_um;
    let c = SPEED_OF_LIGHT_UM_PER_FS;

    let per_point: Vec<(Vec<Complex64>, Vec<Complex64>)> = lambda2_nm
        .par_iter()
        .map(|&lam2| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
            let w2 = omega_from_nm(lam2);
            let mut by_triple = vec![Complex64::new(0.0, 0.0); triples.len()];
            for (t, p) in model.processes.iter().enumerate() {
                let (b, cm) = p.triple.pump_modes();
                let (ab, ac) = (pump.amplitude(b), pump.amplitude(cm));
                if ab == Complex64::new(0.0, 0.0) || ac == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for (&w1, &q) in nodes.iter().zip(&weights) {
                    let g = pump.envelope(w1) * pump.envelope(w2 - w1);
                    if g == 0.0 {
                        continue;
                    }
                    let gamma = match opts.gamma {
                        GammaModel::Flat => Complex64::new(l, 0.0),
                        GammaModel::Phase => {
                            coupling_gamma(phase_mismatch(&p.triple, w2, w1, &model.tables, &model.poling)?, l)
                        }
                    };
                    acc += gamma * (q * g);
                }
                let beta = model.tables.sh_beta(p.triple.sh_mode(), w2)?;
                let pre = Complex64::new(0.0, w2 * w2 / (c * c * beta * beta));
                by_triple[t] = pre * p.overlap * ab * ac * (pump.power * p.triple.multiplicity()) * acc;
            }
            let mut by_mode = vec![Complex64::new(0.0, 0.0); sh_modes.len()];
            for (t, v) in by_triple.iter().enumerate() {
                by_mode[mode_of[t]] += v;
            }
            Ok((by_mode, by_triple))
        })
        .collect::<Result<_>>()?;

    let m = lambda2_nm.len();
    let amplitudes: Vec<Vec<Complex64>> = (0..sh_modes.len()).map(|a| (0..m).map(|i| per_point[i].0[a]).collect()).collect();
    let contributions: Vec<Vec<f64>> =
        (0..triples.len()).map(|t| (0..m).map(|i| per_point[i].1[t].norm_sqr()).collect()).collect();
    let intensity = (0..m).map(|i| per_point[i].0.iter().map(|v| v.norm_sqr()).sum()).collect();
    Ok(Spectrum {
        lambda2_nm: lambda2_nm.to_vec(),
        sh_modes,
        amplitudes,
        intensity,
        triples,
        contributions,
        broadening_nm: 0.0,
    })
}

/// Trapezoid weights on a possibly non-uniform grid.
fn grid_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { x[i] - x[i - 1] } else { 0.0 };
            let right = if i + 1 < n { x[i + 1] - x[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

fn convolve(x: &[f64], w: &[f64], y: &[f64], sigma: f64) -> Vec<f64> {
    let n = x.len();
    let mut out = vec![0.0; n];
    let reach = 6.0 * sigma;
    for j in 0..n {
        if y[j] == 0.0 || w[j] == 0.0 {
            continue;
        }
        let lo = x.partition_point(|&v| v < x[j] - reach);
        let hi = x.partition_point(|&v| v <= x[j] + reach);
        let kern: Vec<f64> = (lo..hi).map(|i| (-0.5 * ((x[i] - x[j]) / sigma).powi(2)).exp()).collect();
        let norm: f64 = kern.iter().zip(&w[lo..hi]).map(|(k, wi)| k * wi).sum();
        if norm <= 0.0 {
            out[j] += y[j];
            continue;
        }
        // spread the mass y_j w_j so that Σ out_i w_i gains exactly y_j w_j
        let mass = y[j] * w[j];
        for (k, i) in (lo..hi).enumerate() {
            out[i] += mass * kern[k] / norm;
        }
    }
    out
}

/// Convolves intensities with a unit-area Gaussian of the given FWHM in nm.
///
/// The discrete kernel is renormalized per source point so the trapezoid
/// integral of the intensity is unchanged, edges included.
pub fn broaden(spec: &Spectrum, fwhm_nm: f64) -> Result<Spectrum> {
    if !(fwhm_nm >= 0.0 && fwhm_nm.is_finite()) {
        return Err(Error::domain("broaden", format!("FWHM must be >= 0, got {fwhm_nm}")));
    }
    if fwhm_nm == 0.0 {
        return Ok(spec.clone());
    }
    if spec.lambda2_nm.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::domain("broaden", "wavelength grid must be strictly increasing"));
    }
    let sigma = fwhm_nm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
    let x = &spec.lambda2_nm;
    let w = grid_weights(x);
    Ok(Spectrum {
        lambda2_nm: x.clone(),
        sh_modes: spec.sh_modes.clone(),
        amplitudes: Vec::new(),
        intensity: convolve(x, &w, &spec.intensity, sigma),
        triples: spec.triples.clone(),
        contributions: spec.contributions.iter().map(|c| convolve(x, &w, c, sigma)).collect(),
        broadening_nm: (spec.broadening_nm.powi(2) + fwhm_nm.powi(2)).sqrt(),
    })
}

/// Full width at half maximum of the curve `y(x)` around its global maximum,
/// by linear interpolation. `None` if the half level is not crossed on both
/// sides.
pub fn fwhm(x: &[f64], y: &[f64]) -> Option<f64> {
    let imax = (0..y.len()).fold(0, |b, i| if y[i] > y[b] { i } else { b });
    fwhm_around(x, y, imax)
}

/// FWHM of the peak at index `imax`.
pub fn fwhm_around(x: &[f64], y: &[f64], imax: usize) -> Option<f64> {
    let half = 0.5 * *y.get(imax)?;
    if !(half > 0.0) {
        return None;
    }
    let mut l = imax;
    while l > 0 && y[l] > half {
        l -= 1;
    }
    let mut r = imax;
    while r + 1 < y.len() && y[r] > half {
        r += 1;
    }
    if y[l] > half || y[r] > half {
        return None;
    }
    let cross = |a: usize, b: usize| x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a]);
    Some(cross(r - 1, r) - cross(l, l + 1))
}

/// Indices of strict local maxima above `rel_floor` times the global maximum.
pub fn local_maxima(y: &[f64], rel_floor: f64) -> Vec<usize> {
    let peak = y.iter().copied().fold(0.0, f64::max);
    (1..y.len().saturating_sub(1))
        .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > rel_floor * peak)
        .collect()
}

/// Trapezoid integral of `y` over `x`.
pub fn integrate(x: &[f64], y: &[f64]) -> f64 {
    grid_weights(x).iter().zip(y).map(|(w, v)| w * v).sum()
}

impl Spectrum {
    /// FWHM of the strongest line, nm.
    pub fn fwhm_nm(&self) -> Option<f64> {
        fwhm(&self.lambda2_nm, &self.intensity)
    }

    /// Wavelength of the intensity maximum, nm.
    pub fn peak_nm(&self) -> f64 {
        let i = (0..self.intensity.len()).fold(0, |b, i| if self.intensity[i] > self.intensity[b] { i } else { b });
        self.lambda2_nm[i]
    }

    pub fn integrated_intensity(&self) -> f64 {
        integrate(&self.lambda2_nm, &self.intensity)
    }

    /// Columns `lambda2_nm, intensity` then one per process.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["lambda2_nm".to_string(), "intensity".to_string()];
        header.extend(self.triples.iter().map(|t| t.to_string()));
        w.write_record(&header).map_err(csv_err)?;
        for i in 0..self.lambda2_nm.len() {
            let mut row = vec![format!("{:.6}", self.lambda2_nm[i]), format!("{:.9e}", self.intensity[i])];
            row.extend(self.contributions.iter().map(|c| format!("{:.9e}", c[i])));
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Evenly spaced grid of `n` points over `[lo, hi]`.
pub fn wavelength_grid(lo_nm: f64, hi_nm: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo_nm + hi_nm)],
        _ => (0..n).map(|k| lo_nm + (hi_nm - lo_nm) * k as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_line(x: &[f64], x0: f64, fwhm: f64) -> Vec<f64> {
        let s = fwhm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
        x.iter().map(|&v| (-0.5 * ((v - x0) / s).powi(2)).exp()).collect()
    }

    fn synthetic(y: Vec<f64>, x: Vec<f64>) -> Spectrum {
        Spectrum {
            lambda2_nm: x,
            sh_modes: vec![],
            amplitudes: vec![],
            intensity: y,
            triples: vec![],
            contributions: vec![],
            broadening_nm: 0.0,
        }
    }

    #[test]
    fn broadening_adds_widths_in_quadrature() {
        let x = wavelength_grid(390.0, 410.0, 8001);
        let s = synthetic(gaussian_line(&x, 400.0, 0.13), x);
        let b = broaden(&s, 1.0).unwrap();
        let expect = (0.13f64.powi(2) + 1.0).sqrt();
        assert!((b.fwhm_nm().unwrap() / expect - 1.0).abs() < 0.03);
        assert!((b.integrated_intensity() / s.integrated_intensity() - 1.0).abs() < 1e-6);
        assert_eq!(broaden(&s, 0.0).unwrap(), s);
    }

    #[test]
    fn close_lines_merge() {
        let x = wavelength_grid(390.0, 410.0, 4001);
        let mk = |sep: f64| {
            let a = gaussian_line(&x, 400.0 - sep / 2.0, 0.05);
            let b = gaussian_line(&x, 400.0 + sep / 2.0, 0.05);
            let s = synthetic(a.iter().zip(&b).map(|(p, q)| p + q).collect(), x.clone());
            local_maxima(&broaden(&s, 1.0).unwrap().intensity, 1e-6).len()
        };
        assert_eq!(mk(0.8), 1);
        assert_eq!(mk(2.5), 2);
    }

    #[test]
    fn fwhm_of_sampled_gaussian() {
        let x = wavelength_grid(-5.0, 5.0, 2001);
        let y = gaussian_line(&x, 0.3, 1.7);
        assert!((fwhm(&x, &y).unwrap() - 1.7).abs() < 1e-3);
        assert!(fwhm(&x[..1000], &y[..1000]).is_none());
    }
}
