//! Replica-symmetric prediction across the phase transition at n_p = 1.
//!
//!     cargo run --release --example replica_solution

use mgimpact::replica::{critical_ns, permanent_impact_theory, saturation_shift, theory};

pub fn main() {
    let crit = critical_ns(1.0).expect("critical point");
    println!("n_s* = {:.6} (zeta_c = {:.6})", crit.n_s, crit.zeta);
    println!("{:>5} {:>10} {:>10} {:>10} {:>10} {:>10}", "n_s", "zeta", "chi", "H/P", "A_h - A_0", "Delta*");
    for k in 1..=8 {
        let ns = 0.5 * k as f64;
        match theory(ns, 1.0) {
            Ok(s) => println!(
                "{ns:>5.2} {:>10.6} {:>10.4} {:>10.6} {:>10.4} {:>10.4}",
                s.zeta,
                s.chi,
                s.h_per_ns,
                saturation_shift(1.0, s.chi),
                permanent_impact_theory(1.0, 500, 100, s.chi)
            ),
            Err(e) => println!("{ns:>5.2} {e}"),
        }
    }
}
