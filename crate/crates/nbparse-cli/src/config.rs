//! `key = value` settings files. Command-line flags win over file values.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use crate::CliError;

/// Keys a settings file may set.
pub const KEYS: &[&str] = &[
    "system",
    "oracle",
    "explore",
    "epochs",
    "seed",
    "head-rules",
    "unary-cap",
    "buckets",
    "threads",
    "trace",
    "by-arity",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `flag` if given, else the parsed file value, else `None`.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key {key}: {e}"))),
        }
    }

    /// A boolean switch: set by the flag or by `key = true`.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.pick::<bool>(None, key)?.unwrap_or(false))
    }
}

impl FromStr for ConfigFile {
    type Err = CliError;

    /// Blank lines and `#` comments are ignored. Keys use the long flag
    /// names; underscores are accepted for dashes.
    fn from_str(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
            if line.is_empty() {
                continue;
            }
            let fail = |m: &str| CliError::Usage(format!("config line {}: {m}", i + 1));
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| fail("expected key = value"))?;
            let key = k.trim().replace('_', "-");
            let value = v.trim();
            if !KEYS.contains(&key.as_str()) {
                return Err(fail(&format!("unknown key {key:?}")));
            }
            if value.is_empty() {
                return Err(fail(&format!("empty value for {key}")));
            }
            if values.insert(key.clone(), value.to_string()).is_some() {
                return Err(fail(&format!("duplicate key {key}")));
            }
        }
        Ok(ConfigFile { values })
    }
}
