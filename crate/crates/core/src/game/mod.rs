//! Single-realization engine for the grand-canonical Minority Game.
//!
//! Each step draws a public pattern `mu`, lets every speculator with a
//! nonnegative score trade its fixed strategy, forms the excess demand from
//! producers plus active speculators (plus any external demand), and
//! charges every speculator `a_i^mu * A` against its score.

mod config;
mod measure;
mod snapshot;
mod state;

pub use config::{GameConfig, DEFAULT_BURN_IN_PER_PATTERN};
pub use measure::{ConditionalAccumulator, ConditionalMeans, Predictability, MIN_STEPS_PER_PATTERN};
pub use snapshot::{GameSnapshot, SNAPSHOT_VERSION};
pub use state::{GameState, StepRecord, StrategyBook};
