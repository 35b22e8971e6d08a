//! Command-line front end: TOML run configuration, dispatch, atomic artifact
//! writes and machine-readable error records.
//!
//! ```text
//! qpmshg <config.toml> [--command census] [--out DIR] [--mesh-res 0.25]
//!        [--no-cache] [--threads N] [--seed N] [--log-json]
//! ```
//!
//! Exit status is 0 on success, 2 for configuration or domain errors, 3 for
//! numerical failures and 1 for I/O.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

pub use commands::{autoconvolution_ratio, run, write_atomic, RunReport};
pub use config::{
    parse_mode_id, CensusSection, Command, GridSpec, MatchSection, ModesSection, OracleSection, RunConfig,
    ScanSection, SpectrumSection, TableSection, SCHEMA_VERSION,
};

use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "qpmshg", version, about = "QPM second-harmonic generation in diffused channel waveguides")]
pub struct Args {
    /// Run configuration (TOML).
    pub config: PathBuf,
    /// Override the configured command.
    #[arg(long, value_enum)]
    pub command: Option<Command>,
    /// Override the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the mesh resolution, µm.
    #[arg(long)]
    pub mesh_res: Option<f64>,
    /// Solve everything afresh and skip the on-disk cache.
    #[arg(long)]
    pub no_cache: bool,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Emit logs as JSON lines.
    #[arg(long)]
    pub log_json: bool,
}

impl Args {
    /// Loads the configuration and applies the command-line overrides.
    pub fn resolve(&self) -> crate::Result<RunConfig> {
        let text = std::fs::read_to_string(&self.config)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", self.config.display())))?;
        let mut cfg = match self.command {
            None => RunConfig::from_toml(&text)?,
            Some(c) => {
                let mut raw: toml::Table =
                    toml::from_str(&text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
                raw.insert("command".into(), toml::Value::String(c.to_string()));
                RunConfig::from_toml(&toml::to_string(&raw).map_err(|e| Error::Config(e.to_string()))?)?
            }
        };
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if let Some(r) = self.mesh_res {
            cfg.solver.mesh.resolution_um = r;
        }
        if self.no_cache {
            cfg.cache = false;
        }
        if let Some(s) = self.seed {
            cfg.seed = Some(s);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Domain { .. } => 2,
        Error::Numerical { .. } | Error::NotPhaseMatchable { .. } => 3,
        Error::Io(_) => 1,
    }
}

/// JSON error record printed on failure.
pub fn error_record(e: &Error) -> serde_json::Value {
    let (kind, module, op) = match e {
        Error::Config(_) => ("config", None, None),
        Error::Domain { op, .. } => ("domain", None, Some(*op)),
        Error::Numerical { module, op, .. } => ("numerical", Some(*module), Some(*op)),
        Error::NotPhaseMatchable { .. } => ("not_phase_matchable", Some("scan"), None),
        Error::Io(_) => ("io", None, None),
    };
    json!({
        "schema_version": SCHEMA_VERSION,
        "error": {
            "kind": kind,
            "module": module,
            "operation": op,
            "message": e.to_string(),
        },
        "exit_code": exit_code(e),
    })
}

fn init_logging(json: bool) {
    use tracing_subscriber::EnvFilter;
    let filter = EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info"));
    let builder = tracing_subscriber::fmt().with_env_filter(filter).with_writer(std::io::stderr);
    let _ = if json { builder.json().try_init() } else { builder.try_init() };
}

/// Entry point of the `qpmshg` binary.
pub fn main_with(args: Args) -> ExitCode {
    init_logging(args.log_json);
    let result = args.resolve().and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| run(&cfg))
    });
    match result {
        Ok(report) => {
            for f in &report.files {
                println!("{}", report.out_dir.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_record(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
