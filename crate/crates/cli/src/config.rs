//! Line-oriented `key = value` configuration. Repeated keys form lists
//! (the grid axes); `#` starts a comment. No quoting, no sections.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub struct RawConfig {
    pairs: Vec<(String, String)>,
    /// FNV-1a of the raw file bytes; stamped on every report row.
    pub hash: String,
}

impl RawConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let bytes = fs::read(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        let hash = format!("{:016x}", fnv1a(&bytes));
        let text = String::from_utf8(bytes)
            .map_err(|_| ConfigError(format!("{} is not UTF-8", path.display())))?;
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        Ok(RawConfig { pairs, hash })
    }

    pub fn values(&self, key: &str) -> Vec<&str> {
        self.pairs
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .collect()
    }

    pub fn one(&self, key: &str) -> Result<&str, ConfigError> {
        let values = self.values(key);
        match values.len() {
            0 => Err(ConfigError(format!("missing required key `{key}`"))),
            1 => Ok(values[0]),
            n => Err(ConfigError(format!("key `{key}` given {n} times, expected once"))),
        }
    }

    pub fn opt(&self, key: &str) -> Result<Option<&str>, ConfigError> {
        let values = self.values(key);
        match values.len() {
            0 => Ok(None),
            1 => Ok(Some(values[0])),
            n => Err(ConfigError(format!("key `{key}` given {n} times, expected once"))),
        }
    }

    pub fn parse_one<T: FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        parse_value(key, self.one(key)?)
    }

    pub fn parse_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        self.opt(key)?.map(|v| parse_value(key, v)).transpose()
    }

    pub fn parse_list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, ConfigError> {
        self.values(key)
            .into_iter()
            .map(|v| parse_value(key, v))
            .collect()
    }

    /// Every key must be one the experiment understands.
    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        for (key, _) in &self.pairs {
            if !allowed.contains(&key.as_str()) {
                return Err(ConfigError(format!("unknown key `{key}`")));
            }
        }
        Ok(())
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("key `{key}`: cannot parse `{value}`")))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}
