use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fields::{normalize, reconstruct_fields, ModeFields};
use super::label::{label_mode, parity_defect, ModeLabel, Parity};
use crate::eigen::{solve_problem, EigenPair, EigenRequest};
use crate::fem::{assemble, build_mesh, AssembledProblem, AssemblyStats, Mesh, MeshParams};
use crate::materials::{Polarization, Waveguide};
use crate::{Error, Result};

/// One guided mode with its fields normalized to unit power.
#[derive(Debug, Clone)]
pub struct GuidedMode {
    pub polarization: Polarization,
    pub lambda_nm: f64,
    /// µm⁻¹.
    pub beta: f64,
    pub n_eff: f64,
    pub label: ModeLabel,
    pub parity: Parity,
    pub label_ambiguous: bool,
    pub residual: f64,
    pub fields: ModeFields,
}

/// Serializable summary of a [`GuidedMode`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRecord {
    pub polarization: Polarization,
    pub lambda_nm: f64,
    pub n_eff: f64,
    pub beta_per_um: f64,
    pub label: [u32; 2],
    pub parity: Parity,
    pub label_ambiguous: bool,
    pub residual: f64,
}

impl GuidedMode {
    pub fn record(&self) -> ModeRecord {
        ModeRecord {
            polarization: self.polarization,
            lambda_nm: self.lambda_nm,
            n_eff: self.n_eff,
            beta_per_um: self.beta,
            label: [self.label.m, self.label.n],
            parity: self.parity,
            label_ambiguous: self.label_ambiguous,
            residual: self.residual,
        }
    }

    /// `‖odd part‖/‖field‖` (or even part for odd modes) of the dominant component.
    pub fn parity_defect(&self) -> Option<f64> {
        parity_defect(&self.fields, self.polarization)
    }
}

/// Guided modes of one polarization at one wavelength, highest `β` first.
#[derive(Debug, Clone)]
pub struct ModeSet {
    pub polarization: Polarization,
    pub lambda_nm: f64,
    pub substrate_index: f64,
    pub peak_index: f64,
    pub modes: Vec<GuidedMode>,
    pub stats: AssemblyStats,
    pub iterations: usize,
}

impl ModeSet {
    pub fn find(&self, label: ModeLabel) -> Option<&GuidedMode> {
        self.modes.iter().find(|m| m.label == label)
    }

    pub fn labels(&self) -> Vec<ModeLabel> {
        self.modes.iter().map(|m| m.label).collect()
    }
}

/// Raw eigenvalues and vectors of a solve, as stored in a cache.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredSolution {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// Persistent store for eigen solutions keyed by a content hash.
pub trait SolutionStore: Send + Sync {
    fn load(&self, key: &str) -> Option<StoredSolution>;
    fn store(&self, key: &str, solution: &StoredSolution);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub mesh: MeshParams,
    /// Relative eigen residual bound.
    pub tolerance: f64,
    pub seed: u64,
    pub max_subspace: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            mesh: MeshParams::default(),
            tolerance: 1e-9,
            seed: 0x5eed,
            max_subspace: 600,
        }
    }
}

/// Mesh, assembly, eigen solve and post-processing in one call.
#[derive(Clone, Default)]
pub struct ModeSolver {
    pub settings: SolverSettings,
    pub store: Option<Arc<dyn SolutionStore>>,
}

impl std::fmt::Debug for ModeSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModeSolver")
            .field("settings", &self.settings)
            .field("store", &self.store.is_some())
            .finish()
    }
}

impl ModeSolver {
    pub fn new(settings: SolverSettings) -> Self {
        Self { settings, store: None }
    }

    pub fn with_store(mut self, store: Arc<dyn SolutionStore>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn mesh(&self, wg: &Waveguide) -> Result<Arc<Mesh>> {
        Ok(Arc::new(build_mesh(wg, &self.settings.mesh)?))
    }

    /// Hash of everything that determines the eigen solution.
    pub fn cache_key(&self, wg: &Waveguide, lambda_nm: f64, pol: Polarization, count: Option<usize>) -> String {
        use sha2::{Digest, Sha256};
        #[derive(Serialize)]
        struct Key<'a> {
            version: u32,
            waveguide: &'a Waveguide,
            settings: &'a SolverSettings,
            lambda_bits: u64,
            polarization: Polarization,
            count: Option<usize>,
        }
        let key = Key {
            version: 1,
            waveguide: wg,
            settings: &self.settings,
            lambda_bits: lambda_nm.to_bits(),
            polarization: pol,
            count,
        };
        let bytes = serde_json::to_vec(&key).expect("key serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    /// Guided modes of `pol` at `lambda_nm`.
    pub fn solve(&self, wg: &Waveguide, lambda_nm: f64, pol: Polarization) -> Result<ModeSet> {
        let mesh = self.mesh(wg)?;
        self.solve_on(mesh, wg, lambda_nm, pol, None)
    }

    /// The `count` guided modes of highest `β` only. Cheaper than a full
    /// solve when the window holds many modes.
    pub fn solve_top(&self, wg: &Waveguide, lambda_nm: f64, pol: Polarization, count: usize) -> Result<ModeSet> {
        let mesh = self.mesh(wg)?;
        self.solve_on(mesh, wg, lambda_nm, pol, Some(count))
    }

    /// As [`ModeSolver::solve`] on a mesh already built for `wg`, optionally
    /// limited to the `count` highest-`β` modes.
    pub fn solve_on(
        &self,
        mesh: Arc<Mesh>,
        wg: &Waveguide,
        lambda_nm: f64,
        pol: Polarization,
        count: Option<usize>,
    ) -> Result<ModeSet> {
        let started = std::time::Instant::now();
        let problem = assemble(mesh, pol, lambda_nm, wg)?;
        let key = self.store.as_ref().map(|_| self.cache_key(wg, lambda_nm, pol, count));
        let cached = match (&self.store, &key) {
            (Some(s), Some(k)) => s.load(k).filter(|c| c.vectors.iter().all(|v| v.len() == problem.dimension())),
            _ => None,
        };
        let hit = cached.is_some();
        let stored = match cached {
            Some(c) => c,
            None => {
                let mut req = EigenRequest::guided(&problem);
                req.tolerance = self.settings.tolerance;
                req.seed = self.settings.seed;
                req.max_subspace = self.settings.max_subspace;
                if let Some(c) = count {
                    req.count = c.max(1);
                }
                let sol = solve_problem(&problem, &req)?;
                let stored = StoredSolution {
                    values: sol.pairs.iter().map(|p| p.value).collect(),
                    residuals: sol.pairs.iter().map(|p| p.residual).collect(),
                    vectors: sol.pairs.into_iter().map(|p| p.vector).collect(),
                    iterations: sol.iterations,
                };
                if let (Some(s), Some(k)) = (&self.store, &key) {
                    s.store(k, &stored);
                }
                stored
            }
        };
        let pairs: Vec<EigenPair> = stored
            .values
            .iter()
            .zip(&stored.vectors)
            .zip(&stored.residuals)
            .map(|((&value, vector), &residual)| EigenPair {
                value,
                vector: vector.clone(),
                residual,
            })
            .collect();
        let set = modes_from_pairs(&problem, &pairs, wg.geometry.width_um / 4.0, stored.iterations)?;
        tracing::info!(
            target: "modes",
            lambda_nm,
            polarization = %pol,
            count = set.modes.len(),
            cache_hit = hit,
            ms = started.elapsed().as_millis() as u64,
            "mode solve"
        );
        Ok(set)
    }

    /// Number of guided modes of `pol` at `lambda_nm`.
    pub fn mode_census(&self, wg: &Waveguide, lambda_nm: f64, pol: Polarization) -> Result<usize> {
        Ok(self.solve(wg, lambda_nm, pol)?.modes.len())
    }
}

/// Turns eigenpairs into labelled, normalized modes ordered by `β` then parity.
pub fn modes_from_pairs(
    problem: &AssembledProblem,
    pairs: &[EigenPair],
    label_offset: f64,
    iterations: usize,
) -> Result<ModeSet> {
    let pol = problem.polarization;
    let k0 = problem.k0;
    let mut modes: Vec<GuidedMode> = pairs
        .par_iter()
        .map(|p| -> Result<GuidedMode> {
            if p.value <= 0.0 {
                return Err(Error::numerical("modes", "modes_from_pairs", "non-positive β² in guided window"));
            }
            let beta = p.value.sqrt();
            let mut fields = reconstruct_fields(problem, beta, &p.vector)?;
            normalize(&mut fields, pol)?;
            let l = label_mode(&fields, pol, label_offset);
            Ok(GuidedMode {
                polarization: pol,
                lambda_nm: problem.lambda_nm,
                beta,
                n_eff: beta / k0,
                label: l.label,
                parity: l.parity,
                label_ambiguous: l.ambiguous,
                residual: p.residual,
                fields,
            })
        })
        .collect::<Result<_>>()?;
    modes.sort_by(|a, b| {
        let close = (a.beta - b.beta).abs() <= 1e-10 * a.beta;
        if close {
            a.parity.cmp(&b.parity)
        } else {
            b.beta.total_cmp(&a.beta)
        }
    });
    Ok(ModeSet {
        polarization: pol,
        lambda_nm: problem.lambda_nm,
        substrate_index: problem.substrate_index,
        peak_index: problem.peak_index,
        modes,
        stats: problem.stats,
        iterations,
    })
}
