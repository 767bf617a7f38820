//! Content-addressed store for interval-exchange word sets.

use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use symdyn_core::iet::{word_text, IetSystem};
use symdyn_core::shiftspace::Symbol;

use crate::CliError;

pub const ENV_VAR: &str = "SYMDYN_CACHE_DIR";

pub struct WordCache {
    root: PathBuf,
}

impl WordCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Identifies the exact coefficients of `a`, `b` and the word length.
    pub fn key(system: &IetSystem, n: usize) -> String {
        let mut h = Sha256::new();
        h.update(format!("iet-words v1\na={}\nb={}\nn={n}\n", system.a(), system.b()));
        hex::encode(h.finalize())
    }

    fn path(&self, system: &IetSystem, n: usize) -> PathBuf {
        self.root.join(format!("{}.words", Self::key(system, n)))
    }

    pub fn load(&self, system: &IetSystem, n: usize) -> Option<Vec<Vec<Symbol>>> {
        let text = std::fs::read_to_string(self.path(system, n)).ok()?;
        let mut words = Vec::new();
        for line in text.lines().filter(|l| !l.starts_with('#')) {
            if line.len() != n {
                return None;
            }
            let w: Option<Vec<Symbol>> = line
                .bytes()
                .map(|c| (b'0'..=b'2').contains(&c).then(|| Symbol((c - b'0') as u32)))
                .collect();
            words.push(w?);
        }
        Some(words)
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// into place.
    pub fn store(&self, system: &IetSystem, n: usize, words: &[Vec<Symbol>]) -> Result<PathBuf, CliError> {
        let io = |e: std::io::Error| CliError::Input(format!("cache {}: {e}", self.root.display()));
        std::fs::create_dir_all(&self.root).map_err(io)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.root).map_err(io)?;
        writeln!(tmp, "# a={} b={} n={n}", system.a(), system.b()).map_err(io)?;
        for w in words {
            let bytes: Vec<u8> = w.iter().map(|s| s.0 as u8).collect();
            writeln!(tmp, "{}", word_text(&bytes)).map_err(io)?;
        }
        let target = self.path(system, n);
        tmp.persist(&target).map_err(|e| io(e.error))?;
        Ok(target)
    }
}
