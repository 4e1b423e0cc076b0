use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;

use crate::error::{config_err, Error, Result};

/// Values read from an INI file, keyed as `section.key`. Command-line flags
/// take precedence over every entry.
#[derive(Debug, Clone, Default)]
pub struct FileSettings {
    entries: Vec<(String, String)>,
}

const KNOWN_KEYS: &[&str] = &[
    "run.seed",
    "run.workers",
    "run.out_dir",
    "game.patterns",
    "game.n_s",
    "game.n_p",
    "game.burn_in",
    "metaorder.h",
    "metaorder.duration",
    "metaorder.start",
    "ensemble.realizations",
    "ensemble.t_max",
    "ensemble.baseline_window",
    "ensemble.twin_baseline",
];

impl FileSettings {
    pub fn load(path: &Path) -> Result<Self> {
        let ini = Ini::load_from_file(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_ini(&ini)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::Config(format!("malformed config: {e}")))?;
        Self::from_ini(&ini)
    }

    fn from_ini(ini: &Ini) -> Result<Self> {
        let mut entries = Vec::new();
        for (section, props) in ini.iter() {
            let section = section.unwrap_or("run");
            for (k, v) in props.iter() {
                let key = format!("{section}.{k}");
                if !KNOWN_KEYS.contains(&key.as_str()) {
                    return config_err(format!("unknown config key '{key}'"));
                }
                entries.push((key, v.trim().to_string()));
            }
        }
        Ok(FileSettings { entries })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("config key '{key}' has invalid value '{v}'"))),
        }
    }

    /// `flag`, else the file entry, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    pub fn out_dir(&self, flag: Option<PathBuf>) -> PathBuf {
        flag.or_else(|| self.raw("run.out_dir").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("mgimpact-out"))
    }
}
