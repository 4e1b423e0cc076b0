//! Ensemble-averaged impact in both phases, with the default estimators,
//! written to a results directory.
//!
//!     cargo run --release --example ensemble_impact [out_dir]

use mgimpact::cli::impact_config;
use mgimpact::ensemble::run_ensemble;
use mgimpact::replica::{permanent_impact_theory, theory};

pub fn main() {
    let out = std::env::args().nth(1).map(std::path::PathBuf::from);
    let p = 32;
    for (k, ns) in [1.0, 5.0].into_iter().enumerate() {
        let mut cfg = impact_config(p, ns, 1.0, 200, 7);
        cfg.game.stream = (k as u64) << 32;
        let res = run_ensemble(&cfg).expect("ensemble");
        let predicted = theory(ns, 1.0).map(|t| permanent_impact_theory(1.0, 5 * p as u64, p, t.chi)).unwrap_or(0.0);
        println!("n_s = {ns}: {:.2} s", res.wall_time_s);
        println!("  Delta(T)  = {:.3} +- {:.3}", res.series.mean[5 * p], res.series.stderr[5 * p]);
        println!("  Delta*    = {:?} (theory {predicted:.3})", res.summaries.permanent_impact);
        println!("  slope     = {:?}", res.summaries.saturation_slope);
        println!("  cost rat. = {:?}", res.summaries.execution_cost_ratio);
        if let Some(dir) = &out {
            res.write_dir(&dir.join(format!("ns={ns}"))).expect("write");
        }
    }
}
