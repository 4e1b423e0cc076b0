use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::ensemble::EnsembleConfig;
use crate::error::{config_err, Result};
use crate::game::GameConfig;
use crate::metaorder::MetaOrderSpec;

/// Pattern count of the published runs.
pub const PRESET_PATTERNS: usize = 400;
/// Realizations per curve of the published runs.
pub const PRESET_REALIZATIONS: u64 = 5000;
/// Burn-in before each order, in units of `P`.
pub const PRESET_BURN_IN_PER_PATTERN: u64 = 20;
/// Execution length of the saturation-slope runs, in units of `P`.
pub const SLOPE_DURATION_PER_PATTERN: u64 = 400;
/// Realizations per point of the saturation-slope runs.
pub const SLOPE_REALIZATIONS: u64 = 1000;
/// Speculator densities of the saturation-slope scan.
pub const SLOPE_NS_GRID: &[f64] = &[0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentPreset {
    /// Asymmetric (n_s = 1) against symmetric (n_s = 5) phase.
    Fig1,
    /// h in {1, 2, 4} at n_s = 1.
    Fig2,
    /// Saturation slope against n_s.
    Fig3,
    /// Permanent impact at n_s in {1, 2}.
    Fig4,
    /// Replica prediction across the phase transition.
    Phase,
}

impl ExperimentPreset {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentPreset::Fig1 => "fig1",
            ExperimentPreset::Fig2 => "fig2",
            ExperimentPreset::Fig3 => "fig3",
            ExperimentPreset::Fig4 => "fig4",
            ExperimentPreset::Phase => "phase",
        }
    }
}

/// Pattern count and realizations divided by `scale`; every time scale
/// stays fixed in units of `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub patterns: usize,
    pub realizations: u64,
}

pub fn scaled(scale: f64, realizations: u64) -> Result<Scaled> {
    if !(scale.is_finite() && scale >= 1.0) {
        return config_err(format!("scale must be at least 1, got {scale}"));
    }
    let patterns = (PRESET_PATTERNS as f64 / scale).round() as usize;
    let realizations = (realizations as f64 / scale).round() as u64;
    if patterns < 2 || realizations < 2 {
        return config_err(format!("scale {scale} leaves too small a system"));
    }
    Ok(Scaled { patterns, realizations })
}

/// One curve of a preset: short burn-in, baseline on a twin, horizon `6 T`.
pub fn impact_config(patterns: usize, n_s: f64, h: f64, realizations: u64, seed: u64) -> EnsembleConfig {
    let p = patterns as u64;
    let game = GameConfig::new(patterns, n_s, 1.0).with_seed(seed).with_burn_in(PRESET_BURN_IN_PER_PATTERN * p);
    EnsembleConfig::new(game, MetaOrderSpec::new(h, 5 * p), realizations).with_baseline_on_twin(true)
}

/// A long order whose second half sits in the saturated regime.
pub fn slope_config(patterns: usize, n_s: f64, realizations: u64, seed: u64) -> EnsembleConfig {
    let p = patterns as u64;
    let dur = SLOPE_DURATION_PER_PATTERN * p;
    let game = GameConfig::new(patterns, n_s, 1.0).with_seed(seed).with_burn_in(PRESET_BURN_IN_PER_PATTERN * p);
    EnsembleConfig::new(game, MetaOrderSpec::new(1.0, dur), realizations)
        .with_t_max(dur + p)
        .with_baseline_window(200 * p)
        .with_baseline_on_twin(true)
}

/// Labelled curves of an impact preset.
pub fn impact_curves(preset: ExperimentPreset, s: Scaled, seed: u64) -> Result<Vec<(String, EnsembleConfig)>> {
    let curve = |n_s: f64, h: f64| impact_config(s.patterns, n_s, h, s.realizations, seed);
    let curves = match preset {
        ExperimentPreset::Fig1 => vec![("ns=1".into(), curve(1.0, 1.0)), ("ns=5".into(), curve(5.0, 1.0))],
        ExperimentPreset::Fig2 => [1.0, 2.0, 4.0].iter().map(|&h| (format!("h={h}"), curve(1.0, h))).collect(),
        ExperimentPreset::Fig4 => [1.0, 2.0].iter().map(|&n| (format!("ns={n}"), curve(n, 1.0))).collect(),
        other => return config_err(format!("preset {} is not an impact preset", other.name())),
    };
    // disjoint streams per curve
    Ok(curves
        .into_iter()
        .enumerate()
        .map(|(k, (l, mut c))| {
            c.game.stream = (k as u64) << 32;
            (l, c)
        })
        .collect())
}
