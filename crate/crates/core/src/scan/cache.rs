use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::modes::{SolutionStore, StoredSolution};
use crate::Result;

const MAGIC: &[u8; 8] = b"QPMSOL01";

/// Eigen solutions stored as raw little-endian `f64` files named by their
/// content hash. Writes go through a temporary file and a rename, so
/// concurrent writers of the same key simply race to an identical result.
#[derive(Debug, Clone)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.bin"))
    }

    fn encode(sol: &StoredSolution) -> Vec<u8> {
        let dim = sol.vectors.first().map_or(0, Vec::len);
        let mut out = Vec::with_capacity(32 + 8 * (2 * sol.values.len() + dim * sol.vectors.len()));
        out.extend_from_slice(MAGIC);
        for n in [sol.values.len(), dim, sol.iterations] {
            out.extend_from_slice(&(n as u64).to_le_bytes());
        }
        for v in sol.values.iter().chain(&sol.residuals).chain(sol.vectors.iter().flatten()) {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    fn decode(bytes: &[u8]) -> Option<StoredSolution> {
        let body = bytes.strip_prefix(MAGIC.as_slice())?;
        let word = |k: usize| -> Option<u64> { Some(u64::from_le_bytes(body.get(8 * k..8 * k + 8)?.try_into().ok()?)) };
        let (n, dim, iterations) = (word(0)? as usize, word(1)? as usize, word(2)? as usize);
        if (body.len() - 24) % 8 != 0 {
            return None;
        }
        let floats: Vec<f64> = body[24..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        if Some(floats.len()) != n.checked_mul(dim.checked_add(2)?) {
            return None;
        }
        Some(StoredSolution {
            values: floats[..n].to_vec(),
            residuals: floats[n..2 * n].to_vec(),
            vectors: floats[2 * n..].chunks(dim.max(1)).take(n).map(<[f64]>::to_vec).collect(),
            iterations,
        })
    }
}

impl SolutionStore for DiskCache {
    fn load(&self, key: &str) -> Option<StoredSolution> {
        let bytes = fs::read(self.path(key)).ok()?;
        let sol = Self::decode(&bytes);
        if sol.is_none() {
            tracing::warn!(target: "cache", key, "ignoring unreadable cache entry");
        }
        sol
    }

    fn store(&self, key: &str, solution: &StoredSolution) {
        let write = || -> std::io::Result<()> {
            let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
            tmp.write_all(&Self::encode(solution))?;
            tmp.persist(self.path(key)).map_err(|e| e.error)?;
            Ok(())
        };
        if let Err(e) = write() {
            tracing::warn!(target: "cache", key, error = %e, "could not write cache entry");
        }
    }
}
