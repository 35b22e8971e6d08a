use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{parse_mode_id, Command, RunConfig, SCHEMA_VERSION};
use crate::materials::{Polarization, ShgType};
use crate::modes::{render_intensity, ModeRecord, ModeSolver};
use crate::oracles::{autoconvolution_spectrum, marcatili_rect_index, poling_harmonics_fft, slab_effective_index, SlabStack};
use crate::scan::{
    allowed_processes, find_phase_matched_wavelength, matchable_in, optimal_poling_period, process_table,
    sensitivity_scan, DiskCache, Study, OVERLAP_THRESHOLD,
};
use crate::shg::{broaden, fwhm, nm_from_omega, sh_spectrum, ProcessTriple, PumpSpec};
use crate::{Error, Result};

/// Files written by one run, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub command: Command,
    pub out_dir: PathBuf,
    pub files: Vec<String>,
}

struct Sink {
    dir: PathBuf,
    files: Vec<String>,
}

impl Sink {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn bytes(&mut self, name: &str, data: &[u8]) -> Result<()> {
        write_atomic(&self.dir.join(name), data)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut data = serde_json::to_vec_pretty(value).map_err(|e| Error::Io(std::io::Error::other(e)))?;
        data.push(b'\n');
        self.bytes(name, &data)
    }

    fn csv(&mut self, name: &str, f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
        let mut data = Vec::new();
        f(&mut data)?;
        self.bytes(name, &data)
    }
}

/// Temporary file in the target directory, then a rename.
pub fn write_atomic(path: &Path, data: &[u8]) -> Result<()> {
    use std::io::Write;
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(data)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn study(cfg: &RunConfig) -> Result<Study> {
    let mut settings = cfg.solver;
    if let Some(seed) = cfg.seed {
        settings.seed = seed;
    }
    let mut solver = ModeSolver::new(settings);
    if cfg.cache {
        solver = solver.with_store(Arc::new(DiskCache::new(cfg.out_dir.join("cache"))?));
    }
    Ok(Study::new(solver, cfg.device.clone(), cfg.plan))
}

fn header(cfg: &RunConfig) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(cfg.command.to_string()));
    m
}

/// Dispatches the configured command and writes its artifacts.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut sink = Sink::new(&cfg.out_dir)?;
    tracing::info!(target: "cli", command = %cfg.command, out = %cfg.out_dir.display(), "run");
    match cfg.command {
        Command::Modes => modes(cfg, &mut sink)?,
        Command::Census => census(cfg, &mut sink)?,
        Command::Match => matching(cfg, &mut sink)?,
        Command::Spectrum => spectrum(cfg, &mut sink)?,
        Command::Scan => scan(cfg, &mut sink)?,
        Command::Table => table(cfg, &mut sink)?,
        Command::Oracle => oracle(cfg, &mut sink)?,
    }
    Ok(RunReport {
        command: cfg.command,
        out_dir: cfg.out_dir.clone(),
        files: sink.files,
    })
}

fn modes(cfg: &RunConfig, sink: &mut Sink) -> Result<()> {
    let sec = cfg.modes.clone().unwrap_or_default();
    let study = study(cfg)?;
    let wg = &cfg.device.waveguide;
    let mesh = study.solver.mesh(wg)?;
    let mut sets = Vec::new();
    for &pol in &sec.polarizations {
        sets.push(study.solver.solve_on(mesh.clone(), wg, sec.lambda_nm, pol, sec.count)?);
    }
    let records: Vec<ModeRecord> = sets.iter().flat_map(|s| s.modes.iter().map(|m| m.record())).collect();
    let mut out = header(cfg);
    out.insert("lambda_nm".into(), json!(sec.lambda_nm));
    out.insert("modes".into(), serde_json::to_value(&records).map_err(|e| Error::Io(std::io::Error::other(e)))?);
    sink.json("modes.json", &out)?;

    let mut picked = Vec::new();
    for p in &sec.profile {
        let id = parse_mode_id(p)?;
        let m = sets
            .iter()
            .filter(|s| s.polarization == id.polarization)
            .find_map(|s| s.find(id.label))
            .ok_or_else(|| Error::domain("modes", format!("profile mode {id} was not found")))?;
        picked.push((m, 1.0));
    }
    if !picked.is_empty() {
        let raster = render_intensity(&picked, &sec.raster);
        sink.csv("profile.csv", |w| raster.write_grid_csv(w))?;
    }
    Ok(())
}

fn census(cfg: &RunConfig, sink: &mut Sink) -> Result<()> {
    let sec = cfg.census.clone().unwrap_or_default();
    let study = study(cfg)?;
    let wg = &cfg.device.waveguide;
    let jobs: Vec<(f64, Polarization)> =
        sec.wavelengths_nm.iter().flat_map(|&l| sec.polarizations.iter().map(move |&p| (l, p))).collect();
    let counts = jobs
        .par_iter()
        .map(|&(lambda, pol)| study.solver.mode_census(wg, lambda, pol))
        .collect::<Result<Vec<_>>>()?;
    let mut out = header(cfg);
    for (&(lambda, pol), n) in jobs.iter().zip(counts) {
        tracing::info!(target: "cli", %pol, lambda_nm = lambda, count = n, "census");
        out.insert(format!("{pol}{}", fmt_wavelength(lambda)), json!(n));
    }
    sink.json("census.json", &out)
}

fn fmt_wavelength(l: f64) -> String {
    if l.fract() == 0.0 {
        format!("{l:.0}")
    } else {
        format!("{l}")
    }
}

fn matching(cfg: &RunConfig, sink: &mut Sink) -> Result<()> {
    let sec = cfg.matching.clone().unwrap_or_default();
    let study = study(cfg)?;
    let records = sec
        .types
        .iter()
        .map(|&t| optimal_poling_period(t, sec.lambda1_nm, &study.solver, &cfg.device.waveguide))
        .collect::<Result<Vec<_>>>()?;
    let mut out = header(cfg);
    out.insert("periods".into(), serde_json::to_value(&records).map_err(|e| Error::Io(std::io::Error::other(e)))?);
    sink.json("match.json", &out)
}

#[derive(Serialize)]
struct LineRecord {
    triple: String,
    lambda2_nm: Option<f64>,
    overlap_abs: f64,
}

fn spectrum(cfg: &RunConfig, sink: &mut Sink) -> Result<()> {
    let sec = cfg.spectrum.clone().unwrap_or_default();
    let grid = sec.grid.values();
    let study = study(cfg)?.for_pump(&cfg.pump);
    let basis = study.basis(&[ShgType::TypeII])?;
    let device = &study.device;
    let explicit = cfg.spectrum_triples()?;
    let lines: Vec<(ProcessTriple, Complex64, Option<f64>)> = if explicit.is_empty() {
        let allowed = allowed_processes(&basis, device, ShgType::TypeII, 1, OVERLAP_THRESHOLD)?;
        matchable_in(&basis, device, allowed, (sec.grid.lo_nm, sec.grid.hi_nm))
            .into_iter()
            .map(|(t, d, l)| (t, d, Some(l)))
            .collect()
    } else {
        explicit
            .iter()
            .map(|t| {
                let d = basis.overlap(t, device)?.value;
                let l = find_phase_matched_wavelength(t, &basis.tables, &device.poling, None).ok().map(|p| p.lambda2_nm);
                Ok((*t, d, l))
            })
            .collect::<Result<_>>()?
    };
    if lines.is_empty() {
        return Err(Error::NotPhaseMatchable {
            lo_nm: sec.grid.lo_nm,
            hi_nm: sec.grid.hi_nm,
        });
    }
    let triples: Vec<ProcessTriple> = lines.iter().map(|l| l.0).collect();
    let model = basis.model(&triples, device)?;
    let ideal = sh_spectrum(&model, &cfg.pump, &grid, &sec.options)?;
    sink.csv("spectrum.csv", |w| ideal.write_csv(w))?;
    let broadened = if sec.broadening_nm > 0.0 {
        let b = broaden(&ideal, sec.broadening_nm)?;
        sink.csv("spectrum_broadened.csv", |w| b.write_csv(w))?;
        Some(b)
    } else {
        None
    };

    let mut out = header(cfg);
    out.insert("peak_nm".into(), json!(ideal.peak_nm()));
    out.insert("fwhm_nm".into(), json!(ideal.fwhm_nm()));
    out.insert("integrated_intensity".into(), json!(ideal.integrated_intensity()));
    out.insert("broadening_nm".into(), json!(sec.broadening_nm));
    out.insert("broadened_fwhm_nm".into(), json!(broadened.as_ref().and_then(|b| b.fwhm_nm())));
    let recs: Vec<LineRecord> = lines
        .iter()
        .map(|(t, d, l)| LineRecord {
            triple: t.to_string(),
            lambda2_nm: *l,
            overlap_abs: d.norm(),
        })
        .collect();
    out.insert("processes".into(), serde_json::to_value(recs).map_err(|e| Error::Io(std::io::Error::other(e)))?);
    sink.json("spectrum.json", &out)
}

fn scan(cfg: &RunConfig, sink: &mut Sink) -> Result<()> {
    let sec = cfg.scan.clone().ok_or_else(|| Error::Config("command \"scan\" needs a [scan] section".into()))?;
    let study = study(cfg)?;
    let triples = cfg.scan_triples()?;
    let result = sensitivity_scan(&study, sec.param, &sec.values, &triples)?;
    sink.csv("scan.csv", |w| result.write_csv(w))?;
    let mut out = header(cfg);
    let summary: Vec<Value> = triples
        .iter()
        .enumerate()
        .map(|(k, t)| {
            json!({
                "triple": t.to_string(),
                "nominal_lambda2_nm": result.nominal_lambda2_nm[k],
                "spread_nm": result.spread(k),
                "slope_nm_per_um": result.slope[k],
                "truncated": result.truncated[k],
            })
        })
        .collect();
    out.insert("param".into(), json!(sec.param.to_string()));
    out.insert("values".into(), json!(sec.values));
    out.insert("triples".into(), Value::Array(summary));
    sink.json("scan.json", &out)
}

fn table(cfg: &RunConfig, sink: &mut Sink) -> Result<()> {
    let sec = cfg.table.clone().unwrap_or_default();
    let study = study(cfg)?;
    let t = process_table(&study, &cfg.pump, &sec.grid.values(), sec.metric, &sec.options)?;
    sink.csv("table.csv", |w| t.write_csv(w))?;
    sink.csv("table_spectrum.csv", |w| t.spectrum.write_csv(w))?;
    let mut out = header(cfg);
    out.insert("metric".into(), serde_json::to_value(t.metric).map_err(|e| Error::Io(std::io::Error::other(e)))?);
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| {
            json!({
                "triple": r.triple.modes_string(),
                "lambda2_nm": r.lambda2_nm,
                "rel_power": r.rel_power,
                "overlap_abs": r.overlap_abs,
            })
        })
        .collect();
    out.insert("rows".into(), Value::Array(rows));
    sink.json("table.json", &out)
}

/// SH-shape FWHM of `pump` in the flat phase-matching limit and the ratio
/// `Δλ₁ / Δλ₂`, both from the direct-sum autoconvolution.
pub fn autoconvolution_ratio(pump: &PumpSpec, points: usize) -> Result<(f64, f64)> {
    let (lo, hi) = pump.support();
    let dw = (hi - lo) / (points - 1) as f64;
    let field: Vec<Complex64> = (0..points).map(|k| Complex64::new(pump.envelope(lo + k as f64 * dw), 0.0)).collect();
    let (w2, i2) = autoconvolution_spectrum(&field, lo, dw);
    let mut pairs: Vec<(f64, f64)> = w2.iter().zip(&i2).map(|(&w, &i)| (nm_from_omega(w), i)).collect();
    pairs.reverse();
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let width = fwhm(&x, &y).ok_or_else(|| Error::numerical("oracles", "autoconvolution", "SH line not resolved"))?;
    Ok((width, pump.fwhm_nm / width))
}

fn oracle(cfg: &RunConfig, sink: &mut Sink) -> Result<()> {
    let sec = cfg.oracle.unwrap_or_default();
    let stack = SlabStack::symmetric(sec.slab_core_index, sec.slab_cladding_index, sec.slab_thickness_um);
    let mut slab = BTreeMap::new();
    for pol in Polarization::BOTH {
        slab.insert(pol.to_string(), slab_effective_index(&stack, sec.lambda_nm, pol, 0)?);
    }
    let marcatili = marcatili_rect_index(
        sec.slab_thickness_um,
        sec.slab_thickness_um,
        sec.slab_core_index,
        sec.slab_cladding_index,
        sec.lambda_nm,
        (0, 0),
    )?;
    let fft = poling_harmonics_fft(cfg.device.poling.duty, sec.max_order, sec.fft_samples);
    let analytic = (1..=sec.max_order as u32)
        .map(|m| cfg.device.poling.harmonic_amplitude(m))
        .collect::<Result<Vec<_>>>()?;
    let poling_err = fft.iter().zip(&analytic).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (sh_width, ratio) = autoconvolution_ratio(&cfg.pump, 2001)?;

    let mut out = header(cfg);
    out.insert("slab_n_eff".into(), json!(slab));
    out.insert("marcatili_n_eff_00".into(), json!(marcatili));
    out.insert("poling_fft".into(), json!(fft));
    out.insert("poling_analytic".into(), json!(analytic));
    out.insert("poling_max_abs_error".into(), json!(poling_err));
    out.insert("autoconvolution_sh_fwhm_nm".into(), json!(sh_width));
    out.insert("bandwidth_ratio".into(), json!(ratio));
    out.insert("bandwidth_ratio_expected".into(), json!(2.0 * std::f64::consts::SQRT_2));
    sink.json("oracle.json", &out)
}
