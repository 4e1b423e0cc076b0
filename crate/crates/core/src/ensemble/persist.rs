use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

use super::{EnsembleConfig, EnsembleResult, Summaries};

pub const SERIES_FILE: &str = "impact.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// SHA-256 of `content` framed as a git blob (`"blob <len>\0" + content`).
pub fn git_style_hash(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of every input that affects the numbers. The worker count is left
/// out since results do not depend on it.
pub fn config_hash(config: &EnsembleConfig) -> String {
    let mut c = config.clone();
    c.workers = 0;
    git_style_hash(&serde_json::to_vec(&c).expect("config serializes"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: EnsembleConfig,
    pub config_hash: String,
    pub seed: u64,
    pub realizations_used: u64,
    pub wall_time_s: f64,
    pub summaries: Summaries,
    pub files: Vec<String>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(File::open(path)?)?)
    }
}

impl EnsembleResult {
    pub fn manifest(&self) -> Manifest {
        Manifest {
            config: self.config.clone(),
            config_hash: config_hash(&self.config),
            seed: self.config.game.seed,
            realizations_used: self.realizations_used,
            wall_time_s: self.wall_time_s,
            summaries: self.summaries.clone(),
            files: vec![SERIES_FILE.to_string()],
        }
    }

    /// Writes the mean trajectory and the manifest into `dir`, creating it
    /// if needed. The CSV is a pure function of the configuration.
    pub fn write_dir(&self, dir: &Path) -> Result<Manifest> {
        fs::create_dir_all(dir)?;
        let manifest = self.manifest();
        let csv = BufWriter::new(File::create(dir.join(SERIES_FILE))?);
        self.series.write_csv(csv, &[format!("config_hash={}", manifest.config_hash)])?;
        let json = BufWriter::new(File::create(dir.join(MANIFEST_FILE))?);
        serde_json::to_writer_pretty(json, &manifest)?;
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::run_ensemble;
    use crate::game::GameConfig;
    use crate::metaorder::MetaOrderSpec;

    #[test]
    fn git_blob_framing() {
        // sha256 of "blob 0\0"
        assert_eq!(
            git_style_hash(b""),
            "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813"
        );
    }

    #[test]
    fn round_trip_through_a_directory() {
        let game = GameConfig::new(8, 1.0, 1.0).with_seed(1).with_burn_in(100);
        let cfg = EnsembleConfig::new(game, MetaOrderSpec::new(1.0, 8), 3).with_baseline_window(800);
        let res = run_ensemble(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let m = res.write_dir(dir.path()).unwrap();
        let loaded = Manifest::load(&dir.path().join(MANIFEST_FILE)).unwrap();
        assert_eq!(loaded, m);
        assert_eq!(config_hash(&cfg.clone().with_workers(7)), m.config_hash);

        let again = run_ensemble(&loaded.config).unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        again.write_dir(dir2.path()).unwrap();
        let a = fs::read(dir.path().join(SERIES_FILE)).unwrap();
        let b = fs::read(dir2.path().join(SERIES_FILE)).unwrap();
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().starts_with(&format!("# config_hash={}", m.config_hash)));
    }
}
