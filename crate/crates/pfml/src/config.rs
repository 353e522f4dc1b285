//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Each command
//! declares the keys it understands; anything else is rejected.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("config line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("unknown config key `{key}` (accepted: {accepted})")]
    Unknown { key: String, accepted: String },
    #[error("config key `{key}`: cannot parse `{value}`")]
    Value { key: String, value: String },
    #[error("cannot read config {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(ConfigError::Syntax { line: i + 1 });
            }
            if values.insert(k.to_owned(), v.to_owned()).is_some() {
                return Err(ConfigError::Duplicate {
                    line: i + 1,
                    key: k.to_owned(),
                });
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.values.insert(key.to_owned(), value.to_string());
    }

    /// Rejects keys outside `accepted`.
    pub fn check_keys(&self, accepted: &[&str]) -> Result<(), ConfigError> {
        match self.values.keys().find(|k| !accepted.contains(&k.as_str())) {
            Some(key) => Err(ConfigError::Unknown {
                key: key.clone(),
                accepted: accepted.join(", "),
            }),
            None => Ok(()),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| ConfigError::Value {
                key: key.to_owned(),
                value: v.clone(),
            }),
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Canonical text, one sorted `key=value` per line.
    pub fn canonical(&self) -> String {
        self.values.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let c = Config::parse("# run settings\nmax_sweeps = 20\n\ntolerance=0.01\n").unwrap();
        assert_eq!(c.get("max_sweeps", 100usize), Ok(20));
        assert_eq!(c.get("tolerance", 1e-3), Ok(0.01));
        assert_eq!(c.get("seed", 7u64), Ok(7));
        assert_eq!(c.canonical(), "max_sweeps=20\ntolerance=0.01\n");
        assert!(c.check_keys(&["max_sweeps", "tolerance"]).is_ok());
        assert!(matches!(c.check_keys(&["max_sweeps"]), Err(ConfigError::Unknown { .. })));
    }

    #[test]
    fn rejects_malformed_lines() {
        assert_eq!(Config::parse("a = 1\njunk\n"), Err(ConfigError::Syntax { line: 2 }));
        assert!(matches!(Config::parse("a=1\na=2\n"), Err(ConfigError::Duplicate { line: 2, .. })));
        let c = Config::parse("a = x").unwrap();
        assert!(matches!(c.get("a", 1.0), Err(ConfigError::Value { .. })));
    }
}
