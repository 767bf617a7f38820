//! `key = value` run configuration files.

use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

pub const KEYS: &[&str] = &[
    "lambda",
    "n_max",
    "horizon",
    "format",
    "output",
    "seed",
    "witness",
    "oracle_check",
    "cache_dir",
    "a",
    "b",
    "threads",
    "emit_plot_data",
];

/// Values from a config file. Blank lines and `#` comments are skipped.
#[derive(Clone, Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
    origin: String,
}

impl ConfigFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Input(format!("{origin}:{}: expected key=value", i + 1)));
            };
            let k = k.trim().replace('-', "_");
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Input(format!("{origin}:{}: unknown key {k:?}", i + 1)));
            }
            values.insert(k, v.trim().to_string());
        }
        Ok(Self {
            values,
            origin: origin.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Input(format!("{}: bad value {v:?} for {key}", self.origin))),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }
}
