//! Flat key-value configuration with one `[section]` per experiment.
//!
//! ```text
//! # comment
//! experiment = sw-scan
//! seed = 7
//!
//! [sw-scan]
//! lambda = 1.0
//! b_values = 1e2 1e3 1e4
//! ```
//!
//! Values are untyped strings parsed on demand; list values are
//! whitespace-separated. Diffable, seedable, no schema engine.

use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("missing key `{key}` in section [{section}]")]
    MissingKey { section: String, key: String },
    #[error("key `{key}` in section [{section}]: cannot parse `{value}` as {wanted}")]
    BadValue {
        section: String,
        key: String,
        value: String,
        wanted: &'static str,
    },
    #[error("config names experiment `{config}` but `{requested}` was requested")]
    ExperimentMismatch { config: String, requested: String },
    #[error("sweep values must be finite and sorted ascending, got {0:?}")]
    BadSweep(Vec<f64>),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
}

/// Parsed configuration: top-level keys plus named sections.
#[derive(Debug, Clone, Default)]
pub struct ExperimentConfig {
    top: BTreeMap<String, String>,
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        Self::from_str_checked(&std::fs::read_to_string(path)?)
    }

    pub fn from_str_checked(text: &str) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        let mut current: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                current = Some(name.trim().to_string());
                config.sections.entry(name.trim().to_string()).or_default();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Malformed {
                    line: idx + 1,
                    text: raw.to_string(),
                });
            };
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            match &current {
                None => {
                    config.top.insert(key, value);
                }
                Some(section) => {
                    config
                        .sections
                        .get_mut(section)
                        .expect("section entry created above")
                        .insert(key, value);
                }
            }
        }
        Ok(config)
    }

    /// Top-level experiment tag, when present.
    pub fn experiment(&self) -> Option<&str> {
        self.top.get("experiment").map(|s| s.as_str())
    }

    pub fn top_u64(&self, key: &str) -> Result<Option<u64>, ConfigError> {
        self.top
            .get(key)
            .map(|v| {
                v.parse().map_err(|_| ConfigError::BadValue {
                    section: "(top)".into(),
                    key: key.into(),
                    value: v.clone(),
                    wanted: "integer",
                })
            })
            .transpose()
    }

    fn lookup(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .get(section)
            .and_then(|s| s.get(key))
            .map(|s| s.as_str())
    }

    pub fn f64(&self, section: &str, key: &str) -> Result<f64, ConfigError> {
        let v = self.require(section, key)?;
        v.parse().map_err(|_| ConfigError::BadValue {
            section: section.into(),
            key: key.into(),
            value: v.into(),
            wanted: "real number",
        })
    }

    pub fn f64_or(&self, section: &str, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.lookup(section, key) {
            None => Ok(default),
            Some(_) => self.f64(section, key),
        }
    }

    pub fn usize_or(&self, section: &str, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.lookup(section, key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| ConfigError::BadValue {
                section: section.into(),
                key: key.into(),
                value: v.into(),
                wanted: "integer",
            }),
        }
    }

    pub fn str_or<'a>(&'a self, section: &str, key: &str, default: &'a str) -> &'a str {
        self.lookup(section, key).unwrap_or(default)
    }

    pub fn require(&self, section: &str, key: &str) -> Result<&str, ConfigError> {
        self.lookup(section, key).ok_or(ConfigError::MissingKey {
            section: section.into(),
            key: key.into(),
        })
    }

    /// Whitespace-separated float list; validated finite and ascending.
    pub fn sweep(
        &self,
        section: &str,
        key: &str,
        default: &[f64],
    ) -> Result<Vec<f64>, ConfigError> {
        let values: Vec<f64> = match self.lookup(section, key) {
            None => default.to_vec(),
            Some(text) => text
                .split_whitespace()
                .map(|tok| {
                    tok.parse().map_err(|_| ConfigError::BadValue {
                        section: section.into(),
                        key: key.into(),
                        value: tok.into(),
                        wanted: "real number",
                    })
                })
                .collect::<Result<_, _>>()?,
        };
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::BadSweep(values));
        }
        Ok(values)
    }

    /// All keys of a section, for echoing parameters into reports.
    pub fn section_map(&self, section: &str) -> BTreeMap<String, String> {
        self.sections.get(section).cloned().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let cfg = ExperimentConfig::from_str_checked(
            "# header\nexperiment = sw-scan\nseed = 3\n\n[sw-scan]\nlambda = 1.5 # inline\nb_values = 1e2 1e3 1e4\n",
        )
        .unwrap();
        assert_eq!(cfg.experiment(), Some("sw-scan"));
        assert_eq!(cfg.top_u64("seed").unwrap(), Some(3));
        assert_eq!(cfg.f64("sw-scan", "lambda").unwrap(), 1.5);
        assert_eq!(
            cfg.sweep("sw-scan", "b_values", &[]).unwrap(),
            vec![100.0, 1000.0, 10000.0]
        );
    }

    #[test]
    fn rejects_malformed_lines_and_unsorted_sweeps() {
        assert!(matches!(
            ExperimentConfig::from_str_checked("not a key value\n"),
            Err(ConfigError::Malformed { line: 1, .. })
        ));
        let cfg = ExperimentConfig::from_str_checked("[s]\nxs = 3 1 2\n").unwrap();
        assert!(matches!(
            cfg.sweep("s", "xs", &[]),
            Err(ConfigError::BadSweep(_))
        ));
    }

    #[test]
    fn missing_keys_are_reported() {
        let cfg = ExperimentConfig::from_str_checked("[a]\nx = 1\n").unwrap();
        assert!(matches!(
            cfg.f64("a", "y"),
            Err(ConfigError::MissingKey { .. })
        ));
    }
}
