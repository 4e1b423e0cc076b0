//! A single realization with a step meta-order. Single paths are noisy;
//! see `ensemble_impact` for averages.
//!
//!     cargo run --release --example single_metaorder

use mgimpact::game::{GameConfig, GameState};
use mgimpact::metaorder::{measure_baseline, run_with_metaorder, MetaOrderSpec};

pub fn main() {
    let p = 64;
    let mut game = GameState::new(&GameConfig::new(p, 1.0, 1.0).with_seed(3)).expect("config");
    game.burn_in().expect("burn-in");
    let baseline = measure_baseline(&mut game, 200 * p as u64).expect("baseline");
    let spec = MetaOrderSpec::new(1.0, 5 * p as u64);
    let traj = run_with_metaorder(&mut game, &spec, 30 * p as u64, baseline).expect("run");
    println!("baseline <A> = {baseline:.4}");
    for k in [0, 1, 2, 5, 10, 20, 30] {
        let t = k * p;
        println!("t = {k:>2} P  Delta = {:>8.3}", traj.delta[t]);
    }
}
