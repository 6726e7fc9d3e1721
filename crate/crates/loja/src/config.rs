//! Guards and tunables, overridable from a key=value file or CLI flags.
//!
//! The file named by `LOJA_CONFIG` (or passed to [`Config::from_file`]) uses
//! one `key = value` pair per line; `#` starts a comment.

use crate::error::LojaError;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Maximum ambient variable count accepted by facet enumeration.
    pub max_n: usize,
    /// Maximum support size accepted by facet enumeration.
    pub max_support: usize,
    /// Probe truncation override; `None` means 4 * max facet offset.
    pub truncation: Option<u64>,
    /// Relative zero tolerance for numeric coefficient groups.
    pub tolerance: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_n: 6,
            max_support: 64,
            truncation: None,
            tolerance: 1e-9,
        }
    }
}

impl Config {
    pub fn from_file(path: &str) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LojaError::Io(format!("cannot read config {path}: {e}")))?;
        Self::parse(&text)
    }

    /// Load `LOJA_CONFIG` when set, defaults otherwise.
    pub fn from_env() -> Result<Config> {
        match std::env::var("LOJA_CONFIG") {
            Ok(path) if !path.is_empty() => Self::from_file(&path),
            _ => Ok(Config::default()),
        }
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                LojaError::Io(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| LojaError::Io(format!("config line {}: {what}", lineno + 1));
            match key {
                "max_n" => cfg.max_n = value.parse().map_err(|_| bad("invalid max_n"))?,
                "max_support" => {
                    cfg.max_support = value.parse().map_err(|_| bad("invalid max_support"))?
                }
                "truncation" => {
                    cfg.truncation = Some(value.parse().map_err(|_| bad("invalid truncation"))?)
                }
                "tolerance" => {
                    cfg.tolerance = value.parse().map_err(|_| bad("invalid tolerance"))?
                }
                other => return Err(LojaError::Io(format!("unknown config key {other:?}"))),
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_overrides_and_comments() {
        let cfg = Config::parse("max_n = 4\n# comment\ntruncation = 500\n").unwrap();
        assert_eq!(cfg.max_n, 4);
        assert_eq!(cfg.truncation, Some(500));
        assert_eq!(cfg.max_support, Config::default().max_support);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Config::parse("bogus = 1").is_err());
    }
}
