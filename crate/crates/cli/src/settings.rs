//! Merges the optional `key=value` config file with command-line flags and
//! turns the result into typed values.

use crate::CliError;
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

/// Keys accepted in config files; flags use the same names with dashes.
pub const KEYS: &[&str] = &[
    "experiment", "alpha", "r", "c", "sigma", "mode", "nx", "nt", "axis", "levels", "ref-nx", "ref-nt", "plan",
    "output", "format", "seed", "budget",
];

#[derive(Debug, Default, Clone)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `key=value` lines; blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", n + 1)))?;
            let k = normalize(k);
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Config(format!("config line {}: unknown key {k:?}", n + 1)));
            }
            values.insert(k, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn set(&mut self, key: &str, value: Option<impl ToString>) {
        if let Some(v) = value {
            self.values.insert(normalize(key), v.to_string());
        }
    }

    /// Inserts `value` only when `key` is not set yet.
    pub fn default_to(&mut self, key: &str, value: impl ToString) {
        self.values.entry(normalize(key)).or_insert_with(|| value.to_string());
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("invalid value {v:?} for {key}"))),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.get(key)?
            .ok_or_else(|| CliError::Config(format!("missing required setting --{key}")))
    }
}
