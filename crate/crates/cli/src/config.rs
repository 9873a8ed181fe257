//! Plain-text `key = value` configuration, overridden by command-line flags.
//!
//! Blank lines and lines starting with `#` are ignored. Keys are the long
//! flag names (`seed`, `samples`, `N`, `M`, `xi_root`, `draws`, `p_min`,
//! `p_max`, `points`, `seeds`, `report`, `out`). The `LI_SEED` environment
//! variable supplies the seed when neither a flag nor the file does.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};

/// Keys accepted in a configuration file.
pub const KEYS: [&str; 12] =
    ["seed", "samples", "N", "M", "xi_root", "draws", "p_min", "p_max", "points", "seeds", "report", "out"];

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "LI_SEED";

/// Parsed configuration values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    /// Parses configuration text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            let key = KEYS
                .iter()
                .find(|known| **known == k || (known.len() == 1 && known.eq_ignore_ascii_case(k)))
                .ok_or_else(|| CliError::Config(format!("line {}: unknown key `{k}`", lineno + 1)))?;
            if v.is_empty() {
                return Err(CliError::Config(format!("line {}: empty value for `{k}`", lineno + 1)));
            }
            if values.insert(key.to_string(), v.to_string()).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key `{k}`", lineno + 1)));
            }
        }
        Ok(Self { values })
    }

    /// Reads and parses a configuration file; a missing file is a
    /// configuration error.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Raw value of a key.
    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Resolves a setting: flag, then file, then `default`.
    pub fn get<T: FromStr>(&self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.raw(key) {
            Some(s) => s.parse().map_err(|e| CliError::Config(format!("invalid value `{s}` for `{key}`: {e}"))),
            None => Ok(default),
        }
    }

    /// Resolves the seed: flag, file, `LI_SEED`, then 0.
    pub fn seed(&self, flag: Option<u64>) -> Result<u64> {
        if let Some(s) = flag {
            return Ok(s);
        }
        if let Some(s) = self.raw("seed") {
            return s.parse().map_err(|e| CliError::Config(format!("invalid seed `{s}`: {e}")));
        }
        match std::env::var(SEED_ENV) {
            Ok(s) => s.trim().parse().map_err(|e| CliError::Config(format!("invalid {SEED_ENV} `{s}`: {e}"))),
            Err(_) => Ok(0),
        }
    }
}

/// Rejects zero sizes and counts.
pub fn positive(name: &str, v: usize) -> Result<usize> {
    if v == 0 {
        Err(CliError::Config(format!("`{name}` must be positive")))
    } else {
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_resolve() {
        let c = RunConfig::parse("# comment\nseed = 7\nN=12\n\nsamples = 40\n").unwrap();
        assert_eq!(c.seed(None).unwrap(), 7);
        assert_eq!(c.seed(Some(3)).unwrap(), 3);
        assert_eq!(c.get::<usize>("N", None, 5).unwrap(), 12);
        assert_eq!(c.get::<usize>("samples", Some(10), 5).unwrap(), 10);
        assert_eq!(c.get::<usize>("draws", None, 5).unwrap(), 5);
    }

    #[test]
    fn malformed_configs_are_rejected() {
        assert!(matches!(RunConfig::parse("seed 7"), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("colour = red"), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("seed = 1\nseed = 2"), Err(CliError::Config(_))));
        let c = RunConfig::parse("samples = many").unwrap();
        assert!(matches!(c.get::<usize>("samples", None, 1), Err(CliError::Config(_))));
        assert!(matches!(positive("N", 0), Err(CliError::Config(_))));
    }
}
