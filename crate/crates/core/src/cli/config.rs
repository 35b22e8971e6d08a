use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::materials::{Polarization, ShgType};
use crate::modes::{ModeLabel, RasterSpec, SolverSettings};
use crate::scan::{RelativePowerMetric, ScanParam};
use crate::shg::{wavelength_grid, BandPlan, Device, ModeId, ProcessTriple, PumpSpec, SpectrumOptions};
use crate::{Error, Result};

/// Version stamped into every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Modes,
    Census,
    Match,
    Spectrum,
    Scan,
    Table,
    Oracle,
}

impl std::fmt::Display for Command {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Command::Modes => "modes",
            Command::Census => "census",
            Command::Match => "match",
            Command::Spectrum => "spectrum",
            Command::Scan => "scan",
            Command::Table => "table",
            Command::Oracle => "oracle",
        };
        f.write_str(s)
    }
}

/// Uniform SH wavelength grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo_nm: f64,
    pub hi_nm: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            lo_nm: 391.0,
            hi_nm: 409.0,
            points: 1801,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo_nm > 0.0 && self.hi_nm > self.lo_nm) || self.points < 2 {
            return Err(Error::Config(format!(
                "grid [{}, {}] nm with {} points is empty",
                self.lo_nm, self.hi_nm, self.points
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        wavelength_grid(self.lo_nm, self.hi_nm, self.points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModesSection {
    pub lambda_nm: f64,
    pub polarizations: Vec<Polarization>,
    /// Solve only this many modes nearest the top of the guided window.
    pub count: Option<usize>,
    /// Modes summed into `profile.csv`, e.g. `"TE00"`.
    pub profile: Vec<String>,
    pub raster: RasterSpec,
}

impl Default for ModesSection {
    fn default() -> Self {
        Self {
            lambda_nm: 800.0,
            polarizations: Polarization::BOTH.to_vec(),
            count: None,
            profile: vec!["TE00".into()],
            raster: RasterSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CensusSection {
    pub wavelengths_nm: Vec<f64>,
    pub polarizations: Vec<Polarization>,
}

impl Default for CensusSection {
    fn default() -> Self {
        Self {
            wavelengths_nm: vec![800.0],
            polarizations: Polarization::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchSection {
    pub types: Vec<ShgType>,
    pub lambda1_nm: f64,
}

impl Default for MatchSection {
    fn default() -> Self {
        Self {
            types: vec![ShgType::TypeII, ShgType::Type0, ShgType::TypeI],
            lambda1_nm: 800.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    pub grid: GridSpec,
    /// Explicit type II first-order triples such as `"00+00->00"`; empty
    /// means every allowed process with a root on the grid.
    pub processes: Vec<String>,
    pub broadening_nm: f64,
    pub options: SpectrumOptions,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            processes: Vec::new(),
            broadening_nm: 1.0,
            options: SpectrumOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub param: ScanParam,
    pub values: Vec<f64>,
    #[serde(default = "default_type")]
    pub shg_type: ShgType,
    #[serde(default = "default_harmonic")]
    pub harmonic: u32,
    #[serde(default = "default_triples")]
    pub triples: Vec<String>,
}

fn default_type() -> ShgType {
    ShgType::TypeII
}

fn default_harmonic() -> u32 {
    1
}

fn default_triples() -> Vec<String> {
    vec!["00+00->00".into()]
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TableSection {
    pub grid: GridSpec,
    pub metric: RelativePowerMetric,
    pub options: SpectrumOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSection {
    /// Symmetric slab check.
    pub slab_core_index: f64,
    pub slab_cladding_index: f64,
    pub slab_thickness_um: f64,
    pub lambda_nm: f64,
    /// Samples per period for the poling FFT.
    pub fft_samples: usize,
    pub max_order: usize,
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            slab_core_index: 1.86,
            slab_cladding_index: 1.845,
            slab_thickness_um: 5.0,
            lambda_nm: 800.0,
            fft_samples: 1 << 16,
            max_order: 5,
        }
    }
}

/// One run of the command-line tool, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    #[serde(default = "default_cache")]
    pub cache: bool,
    pub seed: Option<u64>,
    #[serde(default)]
    pub device: Device,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub plan: BandPlan,
    #[serde(default)]
    pub pump: PumpSpec,
    pub modes: Option<ModesSection>,
    pub census: Option<CensusSection>,
    #[serde(rename = "match")]
    pub matching: Option<MatchSection>,
    pub spectrum: Option<SpectrumSection>,
    pub scan: Option<ScanSection>,
    pub table: Option<TableSection>,
    pub oracle: Option<OracleSection>,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn default_cache() -> bool {
    true
}

/// Accepts `TE00`, `TM(1,0)` and `TE 0,1`.
pub fn parse_mode_id(s: &str) -> Result<ModeId> {
    let t = s.trim();
    let (pol, rest) = match t.get(..2).map(str::to_ascii_uppercase).as_deref() {
        Some("TE") => (Polarization::Te, &t[2..]),
        Some("TM") => (Polarization::Tm, &t[2..]),
        _ => return Err(Error::Config(format!("mode {s:?} must start with TE or TM"))),
    };
    let label: ModeLabel = rest.trim().parse().map_err(|_| Error::Config(format!("cannot parse mode {s:?}")))?;
    Ok(ModeId::new(pol, label))
}

impl RunConfig {
    /// Parses and validates; errors carry the TOML line and field.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.device.validate()?;
        self.solver.mesh.validate()?;
        self.plan.validate()?;
        self.pump.validate()?;
        match self.command {
            Command::Modes => {
                let m = self.modes.clone().unwrap_or_default();
                for p in &m.profile {
                    parse_mode_id(p)?;
                }
                if !(m.lambda_nm > 0.0) {
                    return Err(Error::Config(format!("modes.lambda_nm must be positive, got {}", m.lambda_nm)));
                }
            }
            Command::Census => {
                let c = self.census.clone().unwrap_or_default();
                if c.wavelengths_nm.is_empty() || c.wavelengths_nm.iter().any(|l| !(*l > 0.0)) {
                    return Err(Error::Config("census.wavelengths_nm must list positive wavelengths".into()));
                }
            }
            Command::Match => {
                let m = self.matching.clone().unwrap_or_default();
                if m.types.is_empty() {
                    return Err(Error::Config("match.types is empty".into()));
                }
            }
            Command::Spectrum => {
                let s = self.spectrum.clone().unwrap_or_default();
                s.grid.validate()?;
                s.options.validate()?;
                if !(s.broadening_nm >= 0.0) {
                    return Err(Error::Config("spectrum.broadening_nm must be >= 0".into()));
                }
                self.spectrum_triples()?;
            }
            Command::Scan => {
                let s = self
                    .scan
                    .as_ref()
                    .ok_or_else(|| Error::Config("command \"scan\" needs a [scan] section".into()))?;
                if s.values.len() < 2 {
                    return Err(Error::Config("scan.values needs at least two entries".into()));
                }
                self.scan_triples()?;
            }
            Command::Table => {
                let t = self.table.clone().unwrap_or_default();
                t.grid.validate()?;
                t.options.validate()?;
            }
            Command::Oracle => {}
        }
        Ok(())
    }

    pub fn spectrum_triples(&self) -> Result<Vec<ProcessTriple>> {
        let s = self.spectrum.clone().unwrap_or_default();
        s.processes
            .iter()
            .map(|p| ProcessTriple::parse(ShgType::TypeII, 1, p).map_err(|e| Error::Config(e.to_string())))
            .collect()
    }

    pub fn scan_triples(&self) -> Result<Vec<ProcessTriple>> {
        let Some(s) = &self.scan else {
            return Ok(Vec::new());
        };
        s.triples
            .iter()
            .map(|p| ProcessTriple::parse(s.shg_type, s.harmonic, p).map_err(|e| Error::Config(e.to_string())))
            .collect()
    }
}
