//! Many independent realizations of the meta-order experiment, averaged
//! over the quenched strategies, plus parameter sweeps over them.
//!
//! Realization `r` of an ensemble uses the game seed with ChaCha stream
//! `game.stream + r`; results are reduced in realization order and do not
//! depend on the number of worker threads.

mod persist;
mod run;
mod sweep;

pub use persist::{config_hash, git_style_hash, Manifest, MANIFEST_FILE, SERIES_FILE};
pub use run::{run_ensemble, run_realization, EnsembleConfig, EnsembleResult, Outcome, Summaries};
pub use sweep::{collapse_metric, sweep, SweepAxis};
