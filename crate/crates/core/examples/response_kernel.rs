//! Recovers the relaxation kernel from the ensemble step response and feeds
//! it back into the execution-cost prediction.
//!
//!     cargo run --release --example response_kernel

use mgimpact::cli::impact_config;
use mgimpact::ensemble::run_ensemble;
use mgimpact::metaorder::{estimate_kernel, execution_cost_ratio};
use mgimpact::replica::{exec_cost_ratio_theory, kappa_triple, small_t_ratio, theory};

pub fn main() {
    let p = 32;
    let res = run_ensemble(&impact_config(p, 1.0, 1.0, 300, 4)).expect("ensemble");
    let chi = theory(1.0, 1.0).expect("asymmetric").chi;
    let spec = res.config.metaorder;
    let k = estimate_kernel(&res.series.mean_excess(), &spec, p, 8, Some(chi)).expect("kernel");
    println!("K_r(0) = {:.3}, integral over the order = {:.3}, monotone = {}", k.kr0, k.integral, k.monotone);

    let kernel = k.to_kernel().expect("finite chi");
    let [k0, k1, k2] = kappa_triple(&kernel, spec.duration, p).expect("moments");
    let predicted = exec_cost_ratio_theory(k0, k1, k2).expect("ratio");
    let measured = execution_cost_ratio(&res.series).expect("ratio");
    println!("cost ratio: measured {:.3} +- {:.3}, from kernel {predicted:.3}", measured.value, measured.stderr);
    for t in [p as u64 / 8, p as u64 / 2] {
        println!("short order T = {t}: expansion {:.4}", small_t_ratio(t, p, chi, k.kr0));
    }
}
