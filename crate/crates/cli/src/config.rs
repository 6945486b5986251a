//! `key=value` config files and setting precedence:
//! flags > config file > environment (`CATLAB_SEED`) > defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

pub const SEED_ENV: &str = "CATLAB_SEED";

/// Parsed config file. Keys are normalised to snake_case.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

fn normalise(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('-', "_")
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value, got '{raw}'", lineno + 1))
            })?;
            let key = normalise(key);
            if key.is_empty() {
                return Err(CliError::Usage(format!("config line {}: empty key", lineno + 1)));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalise(key)).map(String::as_str)
    }
}

/// Resolves settings for one command invocation.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    file: ConfigFile,
    env_seed: Option<String>,
}

impl Settings {
    pub fn new(config: Option<&Path>) -> Result<Self, CliError> {
        let file = match config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        Ok(Self {
            file,
            env_seed: std::env::var(SEED_ENV).ok(),
        })
    }

    pub fn with_parts(file: ConfigFile, env_seed: Option<String>) -> Self {
        Self { file, env_seed }
    }

    /// `flag`, else the config file entry `key`, else `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.resolve_opt(flag, key)?.unwrap_or(default))
    }

    pub fn resolve_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.file
            .get(key)
            .map(|raw| {
                raw.parse()
                    .map_err(|_| CliError::Usage(format!("config value for '{key}' is invalid: '{raw}'")))
            })
            .transpose()
    }

    /// Seed: flag, config file, `CATLAB_SEED`, then `default`.
    pub fn seed(&self, flag: Option<u64>, default: u64) -> Result<u64, CliError> {
        if let Some(seed) = self.resolve_opt(flag, "seed")? {
            return Ok(seed);
        }
        match &self.env_seed {
            Some(raw) => raw
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV} is not a u64: '{raw}'"))),
            None => Ok(default),
        }
    }
}
