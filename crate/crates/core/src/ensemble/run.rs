use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Error, Result};
use crate::game::{GameConfig, GameState};
use crate::metaorder::{
    execution_cost_ratio, measure_baseline, permanent_impact, run_with_metaorder, saturation_slope, ImpactSeries,
    ImpactTrajectory, MetaOrderSpec, SeriesBuilder, MIN_BASELINE_PER_PATTERN,
};
use crate::stats::{Estimate, Welford};

/// Realizations handed to the pool at once, per worker.
const BATCH_PER_WORKER: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    /// Game parameters; `seed` is the master seed and `burn_in_steps` the
    /// relaxation before each baseline.
    pub game: GameConfig,
    pub metaorder: MetaOrderSpec,
    pub realizations: u64,
    /// Recorded horizon, execution plus relaxation.
    pub t_max: u64,
    pub baseline_window: u64,
    /// Measure the baseline on a copy of the relaxed game, so the order
    /// starts right after burn-in instead of `baseline_window` steps later.
    #[serde(default)]
    pub baseline_on_twin: bool,
    pub workers: usize,
}

impl EnsembleConfig {
    /// Defaults: horizon `6 T`, baseline window `100 T`, one worker per core.
    pub fn new(game: GameConfig, metaorder: MetaOrderSpec, realizations: u64) -> Self {
        let dur = metaorder.duration;
        EnsembleConfig {
            game,
            metaorder,
            realizations,
            t_max: 6 * dur,
            baseline_window: 100 * dur,
            baseline_on_twin: false,
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_t_max(mut self, t_max: u64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_baseline_window(mut self, window: u64) -> Self {
        self.baseline_window = window;
        self
    }

    pub fn with_baseline_on_twin(mut self, twin: bool) -> Self {
        self.baseline_on_twin = twin;
        self
    }

    pub fn burn_in(&self) -> u64 {
        self.game.burn_in_steps
    }

    pub fn validate(&self) -> Result<()> {
        self.game.validate()?;
        self.metaorder.validate()?;
        if self.realizations < 2 {
            return config_err(format!("need at least 2 realizations, got {}", self.realizations));
        }
        if self.t_max <= self.metaorder.duration {
            return config_err(format!(
                "t_max = {} must exceed the meta-order duration {}",
                self.t_max, self.metaorder.duration
            ));
        }
        let min = MIN_BASELINE_PER_PATTERN * self.game.patterns as u64;
        if self.baseline_window < min {
            return config_err(format!("baseline window {} is shorter than {min}", self.baseline_window));
        }
        if self.workers == 0 {
            return config_err("need at least one worker");
        }
        Ok(())
    }

    /// Game parameters of realization `r`.
    pub fn realization_game(&self, r: u64) -> GameConfig {
        let stream = self.game.stream.wrapping_add(r);
        self.game.clone().with_stream(stream)
    }
}

/// A scalar summary, or the reason it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Value(Estimate),
    Unavailable(String),
}

impl Outcome {
    fn from(r: Result<Estimate>) -> Self {
        match r {
            Ok(e) => Outcome::Value(e),
            Err(e) => Outcome::Unavailable(e.to_string()),
        }
    }

    pub fn estimate(&self) -> Option<Estimate> {
        match self {
            Outcome::Value(e) => Some(*e),
            Outcome::Unavailable(_) => None,
        }
    }
}

/// Default estimators applied to the ensemble mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summaries {
    pub permanent_impact: Outcome,
    pub saturation_slope: Outcome,
    pub execution_cost_ratio: Outcome,
    /// Mean and error of the per-realization baselines.
    pub baseline: Estimate,
    /// Sample variance of the per-realization baselines.
    pub baseline_variance: f64,
}

#[derive(Debug, Clone)]
pub struct EnsembleResult {
    pub config: EnsembleConfig,
    pub series: ImpactSeries,
    pub summaries: Summaries,
    pub realizations_used: u64,
    pub wall_time_s: f64,
}

/// Burn-in, baseline and meta-order for realization `r`.
pub fn run_realization(config: &EnsembleConfig, r: u64) -> Result<ImpactTrajectory> {
    let mut state = GameState::new(&config.realization_game(r))?;
    state.burn_in()?;
    let baseline = if config.baseline_on_twin {
        measure_baseline(&mut state.clone(), config.baseline_window)?
    } else {
        measure_baseline(&mut state, config.baseline_window)?
    };
    run_with_metaorder(&mut state, &config.metaorder, config.t_max, baseline)
}

pub fn run_ensemble(config: &EnsembleConfig) -> Result<EnsembleResult> {
    config.validate()?;
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let n = config.realizations;
    let mut builder = SeriesBuilder::new(config.t_max as usize + 1, n);
    let mut baselines = Welford::new(1);
    let batch = (config.workers * BATCH_PER_WORKER) as u64;
    let mut lo = 0;
    while lo < n {
        let hi = (lo + batch).min(n);
        let trajs: Vec<Result<ImpactTrajectory>> =
            pool.install(|| (lo..hi).into_par_iter().map(|r| run_realization(config, r)).collect());
        for (r, t) in (lo..hi).zip(trajs) {
            let t = t.map_err(|e| Error::Realization { index: r as usize, source: Box::new(e) })?;
            baselines.push(&[t.baseline_mean_a]);
            builder.push(&t)?;
        }
        log::debug!("ensemble: {hi}/{n} realizations");
        lo = hi;
    }
    let series = builder.finish(config.game.patterns, config.metaorder.duration, config.metaorder.h)?;
    let summaries = Summaries {
        permanent_impact: Outcome::from(permanent_impact(&series, None)),
        saturation_slope: Outcome::from(saturation_slope(&series, None)),
        execution_cost_ratio: Outcome::from(execution_cost_ratio(&series)),
        baseline: Estimate::new(baselines.mean()[0], baselines.stderr()[0]),
        baseline_variance: baselines.variance()[0],
    };
    Ok(EnsembleResult {
        config: config.clone(),
        realizations_used: series.realizations,
        series,
        summaries,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}
