//! Meta-order injection, impact trajectories and the estimators applied to
//! their ensemble averages.

mod estimators;
mod run;
mod series;

pub use estimators::{
    default_tail_window, estimate_kernel, execution_cost_ratio, permanent_impact, saturation_slope, KernelEstimate,
    MIN_FIT_SAMPLES,
};
pub use run::{measure_baseline, run_with_metaorder, ImpactTrajectory, MetaOrderSpec, MIN_BASELINE_PER_PATTERN};
pub use series::{ImpactSeries, SeriesBuilder, MAX_JACKKNIFE_BLOCKS};
