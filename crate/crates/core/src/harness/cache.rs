//! On-disk cache of reference solutions: a flat little-endian `f64` file in
//! row-major order plus a `key=value` sidecar. Any sidecar mismatch makes
//! the entry stale.

use super::Level;
use crate::assembly::ProblemSpec;
use crate::error::{Error, Result};
use crate::fem1d::Mesh1D;
use crate::fracops::TemporalGrid;
use crate::solver::SpaceTimeField;
use std::fs;
use std::path::{Path, PathBuf};

pub const CACHE_DIR_VAR: &str = "FRACSTEP_CACHE_DIR";

#[derive(Debug, Clone)]
pub struct ReferenceCache {
    dir: PathBuf,
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}

impl ReferenceCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Cache rooted at `$FRACSTEP_CACHE_DIR`, if set and non-empty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_VAR)
            .filter(|v| !v.is_empty())
            .map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn stem(spec: &ProblemSpec, level: Level) -> String {
        sanitize(&format!(
            "{}-a{}-nx{}-nt{}-{:016x}",
            spec.tag,
            spec.alpha,
            level.n_cells,
            level.n_steps,
            fingerprint(&format!("{spec:?}"))
        ))
    }

    fn metadata(spec: &ProblemSpec, level: Level) -> String {
        format!(
            "format=f64-le-row-major\nexperiment={}\nalpha={:?}\nt_final={:?}\nn_cells={}\nn_steps={}\nproblem={:?}\n",
            spec.tag, spec.alpha, spec.t_final, level.n_cells, level.n_steps, spec
        )
    }

    fn paths(&self, spec: &ProblemSpec, level: Level) -> (PathBuf, PathBuf) {
        let stem = Self::stem(spec, level);
        (self.dir.join(format!("{stem}.bin")), self.dir.join(format!("{stem}.meta")))
    }

    /// The cached solution, or `None` when absent or stale.
    pub fn load(&self, spec: &ProblemSpec, level: Level) -> Result<Option<SpaceTimeField>> {
        let (bin, meta) = self.paths(spec, level);
        match fs::read_to_string(&meta) {
            Ok(text) if text == Self::metadata(spec, level) => {}
            Ok(_) => return Ok(None),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        }
        let bytes = match fs::read(&bin) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let mesh = Mesh1D::new(level.n_cells)?;
        let grid = TemporalGrid::uniform(spec.t_final, level.n_steps)?;
        if bytes.len() != 8 * level.n_steps * mesh.n_interior() {
            return Ok(None);
        }
        let values = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect();
        Ok(Some(SpaceTimeField { grid, mesh, values }))
    }

    pub fn store(&self, spec: &ProblemSpec, level: Level, field: &SpaceTimeField) -> Result<()> {
        if field.mesh.n_cells() != level.n_cells || field.steps() != level.n_steps {
            return Err(Error::Cache("field shape does not match its cache key".into()));
        }
        fs::create_dir_all(&self.dir)?;
        let (bin, meta) = self.paths(spec, level);
        let mut bytes = Vec::with_capacity(8 * field.values.len());
        for v in &field.values {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        // data first, sidecar last: a crash in between leaves a stale entry
        let tmp = bin.with_extension("bin.tmp");
        fs::write(&tmp, &bytes)?;
        fs::rename(&tmp, &bin)?;
        let tmp = meta.with_extension("meta.tmp");
        fs::write(&tmp, Self::metadata(spec, level))?;
        fs::rename(&tmp, &meta)?;
        Ok(())
    }
}

/// FNV-1a, enough to keep distinct problems in distinct files.
fn fingerprint(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}
