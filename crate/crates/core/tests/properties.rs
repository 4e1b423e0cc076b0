mod common;

use mgimpact::game::{GameConfig, GameState};
use mgimpact::metaorder::{permanent_impact, run_with_metaorder, ImpactSeries, MetaOrderSpec};
use mgimpact::replica::{critical_ns, erf_scaled, self_overlap, solve_zeta, susceptibility, theory, zeta_residual};
use mgimpact::stats::{mean_stderr, Welford};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engine_matches_naive_recomputation(patterns in 2usize..=32, ns in 0.2f64..6.0, seed in any::<u64>()) {
        prop_assert_eq!(common::cache_coherence(patterns, ns, seed, 10_000), Ok(()));
    }

    #[test]
    fn impact_increments_are_bounded(patterns in 2usize..=32, ns in 0.2f64..6.0, h in -4.0f64..4.0, seed in any::<u64>()) {
        let cfg = GameConfig::new(patterns, ns, 1.0).with_seed(seed).with_burn_in(10 * patterns as u64);
        let mut st = GameState::new(&cfg).unwrap();
        st.burn_in().unwrap();
        let traj = run_with_metaorder(&mut st, &MetaOrderSpec::new(h, 3 * patterns as u64), 8 * patterns as u64, 0.0).unwrap();
        let bound = (st.book().num_speculators() + st.book().num_producers()) as f64 + h.abs();
        prop_assert_eq!(traj.delta[0], 0.0);
        for w in traj.delta.windows(2) {
            prop_assert!((w[1] - w[0]).abs() <= bound / patterns as f64 + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn overlap_is_decreasing_and_bounded(a in 1e-6f64..60.0, b in 1e-6f64..60.0) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (flo, fhi) = (self_overlap(lo).unwrap(), self_overlap(hi).unwrap());
        prop_assert!(flo > fhi);
        prop_assert!(fhi > 0.0 && flo < 0.5);
    }

    #[test]
    fn saddle_point_identities(frac in 0.01f64..0.995, np in 0.1f64..10.0) {
        let ns = frac * critical_ns(np).unwrap().n_s;
        let z = solve_zeta(ns, np).unwrap();
        prop_assert!(zeta_residual(z, ns, np).abs() < 1e-12 * (1.0 / (z * z)).max(1.0));
        let chi = susceptibility(z, ns).unwrap();
        prop_assert!(((1.0 + chi) * (1.0 - 0.5 * ns * erf_scaled(z)) - 1.0).abs() < 1e-12);
        let s = theory(ns, np).unwrap();
        prop_assert!((s.h_per_ns - s.h_per_ns_from_chi()).abs() < 1e-12);
        prop_assert!((s.rho * (1.0 + s.chi) - 1.0).abs() < 1e-15);
        prop_assert!(s.g >= 0.0 && s.g <= 0.5);
    }

    #[test]
    fn welford_equals_two_pass(xs in prop::collection::vec(-1e3f64..1e3, 2..200)) {
        let mut w = Welford::new(1);
        for x in &xs {
            w.push(&[*x]);
        }
        let e = mean_stderr(&xs);
        prop_assert!((w.mean()[0] - e.value).abs() < 1e-10);
        prop_assert!((w.stderr()[0] - e.stderr).abs() < 1e-10);
    }

    #[test]
    fn permanent_impact_is_shift_equivariant(level in -10.0f64..10.0, c in -5.0f64..5.0) {
        let delta: Vec<f64> = (0..=120).map(|t| if t < 20 { level * t as f64 / 20.0 } else { level }).collect();
        let shifted: Vec<f64> = delta.iter().map(|d| d + c).collect();
        let a = permanent_impact(&ImpactSeries::exact(delta, 4, 20, 1.0), None).unwrap();
        let b = permanent_impact(&ImpactSeries::exact(shifted, 4, 20, 1.0), None).unwrap();
        prop_assert!((b.value - a.value - c).abs() < 1e-12);
    }
}
