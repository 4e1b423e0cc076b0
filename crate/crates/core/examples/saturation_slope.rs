//! Stationary shift of the excess demand under a long order, against the
//! replica value 1/(1+chi).
//!
//!     cargo run --release --example saturation_slope

use mgimpact::cli::slope_config;
use mgimpact::ensemble::{sweep, SweepAxis};
use mgimpact::replica::{saturation_shift, theory};

pub fn main() {
    let mut base = slope_config(32, 1.0, 40, 2);
    // shorter than the preset to keep the example quick
    base.metaorder.duration = 100 * 32;
    base.t_max = base.metaorder.duration + 32;
    for (ns, res) in sweep(&base, SweepAxis::Ns, &[0.5, 1.0, 2.0, 5.0]).expect("sweep") {
        let want = theory(ns, 1.0).map(|t| saturation_shift(1.0, t.chi)).unwrap_or(0.0);
        match res.summaries.saturation_slope.estimate() {
            Some(e) => println!("n_s = {ns}: {:.3} +- {:.3}, theory {want:.3}", e.value, e.stderr),
            None => println!("n_s = {ns}: {:?}", res.summaries.saturation_slope),
        }
    }
}
