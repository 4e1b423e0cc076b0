use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};

/// Burn-in length in units of `P` used when none is given explicitly.
pub const DEFAULT_BURN_IN_PER_PATTERN: u64 = 200;

/// Parameters of one grand-canonical Minority Game.
///
/// Agent counts are given as densities per pattern (`n_s = N_s / P`,
/// `n_p = N_p / P`) and rounded to the nearest integer, with a floor of one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    /// Number of information patterns `P`.
    pub patterns: usize,
    /// Speculators per pattern.
    pub n_s: f64,
    /// Producers per pattern.
    pub n_p: f64,
    pub burn_in_steps: u64,
    pub seed: u64,
    /// ChaCha stream selector; realizations of an ensemble share `seed`
    /// and differ only in `stream`.
    #[serde(default)]
    pub stream: u64,
}

impl GameConfig {
    pub fn new(patterns: usize, n_s: f64, n_p: f64) -> Self {
        GameConfig {
            patterns,
            n_s,
            n_p,
            burn_in_steps: DEFAULT_BURN_IN_PER_PATTERN * patterns as u64,
            seed: 0,
            stream: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    pub fn with_burn_in(mut self, steps: u64) -> Self {
        self.burn_in_steps = steps;
        self
    }

    pub fn num_speculators(&self) -> usize {
        round_count(self.n_s, self.patterns)
    }

    pub fn num_producers(&self) -> usize {
        round_count(self.n_p, self.patterns)
    }

    pub fn validate(&self) -> Result<()> {
        if self.patterns < 2 {
            return config_err(format!("need at least 2 patterns, got {}", self.patterns));
        }
        if !(self.n_s.is_finite() && self.n_s > 0.0) {
            return config_err(format!("speculator density must be positive, got {}", self.n_s));
        }
        if !(self.n_p.is_finite() && self.n_p > 0.0) {
            return config_err(format!("producer density must be positive, got {}", self.n_p));
        }
        if self.burn_in_steps == 0 {
            return config_err("burn-in must be at least one step");
        }
        if self.patterns > u32::MAX as usize {
            return config_err("pattern count exceeds u32 range");
        }
        Ok(())
    }
}

fn round_count(density: f64, patterns: usize) -> usize {
    ((density * patterns as f64).round() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_round_and_floor_at_one() {
        let cfg = GameConfig::new(64, 1.0, 0.001);
        assert_eq!(cfg.num_speculators(), 64);
        assert_eq!(cfg.num_producers(), 1);
        assert_eq!(GameConfig::new(10, 0.26, 1.0).num_speculators(), 3);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(GameConfig::new(0, 1.0, 1.0).validate().is_err());
        assert!(GameConfig::new(1, 1.0, 1.0).validate().is_err());
        assert!(GameConfig::new(8, 0.0, 1.0).validate().is_err());
        assert!(GameConfig::new(8, 1.0, -1.0).validate().is_err());
        assert!(GameConfig::new(8, f64::NAN, 1.0).validate().is_err());
        assert!(GameConfig::new(8, 1.0, 1.0).with_burn_in(0).validate().is_err());
        assert!(GameConfig::new(8, 1.0, 1.0).validate().is_ok());
    }

    #[test]
    fn default_burn_in_scales_with_patterns() {
        assert_eq!(GameConfig::new(128, 1.0, 1.0).burn_in_steps, 200 * 128);
    }
}
