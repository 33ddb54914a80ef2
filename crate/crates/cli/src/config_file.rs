//! Optional `key = value` config files.
//!
//! One entry per line, `#` starts a comment, keys match the long flag
//! names (with `-` or `_` accepted). Values parse exactly like the
//! corresponding flag. Precedence: defaults < config file < flags
//! (`BOXLOSS_THREADS` sits between the config file and the built-in
//! default for `threads`).

use crate::error::{usage, CliError};
use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    entries: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config file {}: {e}", path.display())))?;
        let mut entries = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(usage(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                )));
            };
            entries.insert(
                key.trim().replace('-', "_").to_ascii_lowercase(),
                value.trim().to_string(),
            );
        }
        Ok(Self { entries })
    }

    /// Typed lookup; parse failures are usage errors.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| usage(format!("config key `{key}`: {e}"))),
        }
    }

    /// Comma-separated list lookup.
    pub fn get_list(&self, key: &str) -> Option<Vec<String>> {
        self.entries
            .get(key)
            .map(|raw| raw.split(',').map(|s| s.trim().to_string()).collect())
    }
}
