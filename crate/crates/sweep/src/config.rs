//! Flat `key = value` configuration files.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{config, Result};

/// Parsed configuration: blank lines and `#` comments are ignored, keys
/// must come from a known vocabulary and may appear once.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str, allowed: &[&str]) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return config(format!("config line {}: expected key = value", n + 1));
            };
            let (key, value) = (key.trim(), value.trim());
            if !allowed.contains(&key) {
                return config(format!("config line {}: unknown key `{key}`", n + 1));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return config(format!("config line {}: key `{key}` repeated", n + 1));
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .or_else(|_| config(format!("config key `{key}`: cannot parse `{v}`"))),
        }
    }

    /// The command-line value if given, else the file's.
    pub fn merge<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self.parsed(key),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KEYS: &[&str] = &["delta", "h", "preset"];

    #[test]
    fn parses_and_merges() {
        let c = ConfigFile::parse(
            "# comment\n delta = 1.3 \n\npreset=fig2b # trailing\n",
            KEYS,
        )
        .unwrap();
        assert_eq!(c.get("preset"), Some("fig2b"));
        assert_eq!(c.parsed::<f64>("delta").unwrap(), Some(1.3));
        assert_eq!(c.merge(Some(2.0), "delta").unwrap(), Some(2.0));
        assert_eq!(c.merge::<f64>(None, "delta").unwrap(), Some(1.3));
        assert_eq!(c.merge::<f64>(None, "h").unwrap(), None);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(ConfigFile::parse("delta 1", KEYS).is_err());
        assert!(ConfigFile::parse("J = 1", KEYS).is_err());
        assert!(ConfigFile::parse("h = 1\nh = 2", KEYS).is_err());
        let c = ConfigFile::parse("h = abc", KEYS).unwrap();
        assert!(c.parsed::<f64>("h").is_err());
    }
}
