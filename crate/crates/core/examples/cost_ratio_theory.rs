//! Execution-cost ratio and concavity exponent for synthetic kernels.
//!
//!     cargo run --release --example cost_ratio_theory

use mgimpact::replica::{concavity_exponent, exec_cost_ratio_theory, kappa_triple, small_t_ratio, ResponseKernel};

pub fn main() {
    let p = 100;
    let delta = ResponseKernel::pure_delta(50.0);
    let [a, b, c] = kappa_triple(&delta, 5 * p as u64, p).unwrap();
    println!("pure delta: ratio {}", exec_cost_ratio_theory(a, b, c).unwrap());

    let chi = 1.3;
    let tau_r = 2.0;
    let kernel = ResponseKernel::from_fn(chi, 200.0, 200_000, |t| (-t / tau_r).exp() / tau_r).unwrap();
    println!("{:>8} {:>8} {:>8} {:>8}", "T/P", "ratio", "alpha", "small-T");
    for tp in [0.1, 0.5, 1.0, 5.0, 20.0, 100.0] {
        let dur = (tp * p as f64) as u64;
        let [k0, k1, k2] = kappa_triple(&kernel, dur, p).unwrap();
        let r = exec_cost_ratio_theory(k0, k1, k2).unwrap();
        let alpha = concavity_exponent(r).unwrap();
        println!("{tp:>8} {r:>8.4} {alpha:>8.4} {:>8.4}", small_t_ratio(dur, p, chi, 1.0 / tau_r));
    }
}
