//! Flat `key = value` configuration files with `#` comments.
//!
//! Command-line flags override file values; the file supplies defaults.

use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Config::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, String> {
        self.raw(key)
            .map(|s| s.parse::<f64>().map_err(|_| format!("config key {key}: bad number `{s}`")))
            .transpose()
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, String> {
        self.raw(key)
            .map(|s| s.parse::<usize>().map_err(|_| format!("config key {key}: bad integer `{s}`")))
            .transpose()
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>, String> {
        self.raw(key)
            .map(|s| s.parse::<u64>().map_err(|_| format!("config key {key}: bad integer `{s}`")))
            .transpose()
    }

    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, String> {
        self.raw(key).map(parse_f64_list).transpose()
    }

}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("bad number `{t}` in list")))
        .collect()
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("bad integer `{t}` in list")))
        .collect()
}
