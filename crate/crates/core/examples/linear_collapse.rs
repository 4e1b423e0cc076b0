//! Delta(t)/h against t/T for several order sizes.
//!
//!     cargo run --release --example linear_collapse

use mgimpact::cli::impact_config;
use mgimpact::ensemble::{collapse_metric, sweep, SweepAxis};

pub fn main() {
    let base = impact_config(32, 1.0, 1.0, 200, 5);
    let runs = sweep(&base, SweepAxis::H, &[1.0, 2.0, 4.0]).expect("sweep");
    let dur = base.metaorder.duration as usize;
    for step in [dur / 2, dur, 2 * dur, 6 * dur] {
        let row: Vec<String> = runs.iter().map(|(h, r)| format!("{:>7.3}", r.series.mean[step] / h)).collect();
        println!("t/T = {:>4.1}: {}", step as f64 / dur as f64, row.join(" "));
    }
    let series: Vec<_> = runs.iter().map(|(_, r)| &r.series).collect();
    println!("collapse metric = {:.2}", collapse_metric(&series).expect("metric"));
}
