use serde::{Deserialize, Serialize};

use crate::error::{config_err, Error, Result};
use crate::game::GameState;

/// Minimum baseline window, in units of `P`.
pub const MIN_BASELINE_PER_PATTERN: u64 = 100;

/// Step (TWAP) meta-order: extra demand `h` on each of `duration` steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetaOrderSpec {
    /// Child-order size per step; negative for a sell programme.
    pub h: f64,
    /// Number of steps `T` during which the order trades.
    pub duration: u64,
    /// Unperturbed steps between the baseline window and the first child order.
    #[serde(default)]
    pub start: u64,
}

impl MetaOrderSpec {
    pub fn new(h: f64, duration: u64) -> Self {
        MetaOrderSpec { h, duration, start: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.duration == 0 {
            return config_err("meta-order duration must be at least one step");
        }
        if !self.h.is_finite() {
            return config_err(format!("meta-order size must be finite, got {}", self.h));
        }
        Ok(())
    }

    /// Whether `|h|` is small against the typical excess demand `sqrt(P)`,
    /// where linear response applies.
    pub fn is_linear_regime(&self, patterns: usize) -> bool {
        self.h.abs() < 0.5 * (patterns as f64).sqrt()
    }

    /// External demand at time `t` measured from the first child order.
    pub fn demand_at(&self, t: u64) -> f64 {
        if t < self.duration {
            self.h
        } else {
            0.0
        }
    }
}

/// Impact path of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactTrajectory {
    /// `Delta(t) = (1/P) sum_{s<t} (A_h(s) - baseline)` for `t = 0..=t_max`.
    pub delta: Vec<f64>,
    /// `A_h(s) - baseline` for `s = 0..t_max`.
    pub excess: Vec<f64>,
    pub baseline_mean_a: f64,
    pub patterns: usize,
    pub duration: u64,
    pub h: f64,
}

impl ImpactTrajectory {
    pub fn t_max(&self) -> usize {
        self.excess.len()
    }
}

/// Time average of the unperturbed excess demand over `window` steps.
pub fn measure_baseline(state: &mut GameState, window: u64) -> Result<f64> {
    let min = MIN_BASELINE_PER_PATTERN * state.patterns() as u64;
    if window < min {
        return Err(Error::Measurement(format!(
            "baseline window of {window} steps is shorter than {min} ({MIN_BASELINE_PER_PATTERN} per pattern)"
        )));
    }
    let mut sum = 0.0;
    for _ in 0..window {
        sum += state.step().excess_demand();
    }
    Ok(sum / window as f64)
}

/// Runs the meta-order and the subsequent relaxation for `t_max` steps in
/// total. Speculators score against the perturbed excess demand.
pub fn run_with_metaorder(
    state: &mut GameState,
    spec: &MetaOrderSpec,
    t_max: u64,
    baseline: f64,
) -> Result<ImpactTrajectory> {
    spec.validate()?;
    if t_max <= spec.duration {
        return config_err(format!(
            "horizon {t_max} must exceed the meta-order duration {}",
            spec.duration
        ));
    }
    if !spec.is_linear_regime(state.patterns()) {
        log::warn!(
            "meta-order size {} is not small against sqrt(P) = {:.1}; linear response may fail",
            spec.h,
            (state.patterns() as f64).sqrt()
        );
    }
    for _ in 0..spec.start {
        state.step();
    }
    let inv_p = 1.0 / state.patterns() as f64;
    let mut excess = Vec::with_capacity(t_max as usize);
    let mut delta = Vec::with_capacity(t_max as usize + 1);
    let mut cumulative = 0.0;
    delta.push(0.0);
    for t in 0..t_max {
        let a = state.step_with_demand(spec.demand_at(t)).excess_demand() - baseline;
        excess.push(a);
        cumulative += a;
        delta.push(cumulative * inv_p);
    }
    Ok(ImpactTrajectory {
        delta,
        excess,
        baseline_mean_a: baseline,
        patterns: state.patterns(),
        duration: spec.duration,
        h: spec.h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameConfig;

    fn producers_only(patterns: usize) -> GameState {
        let mut st = GameState::new(&GameConfig::new(patterns, 1.0, 1.0).with_seed(2)).unwrap();
        for i in 0..st.book().num_speculators() {
            st.set_score(i, f64::NEG_INFINITY);
        }
        st
    }

    #[test]
    fn spec_validation() {
        assert!(MetaOrderSpec::new(1.0, 0).validate().is_err());
        assert!(MetaOrderSpec::new(f64::NAN, 3).validate().is_err());
        assert!(MetaOrderSpec::new(-2.0, 3).validate().is_ok());
        assert!(MetaOrderSpec::new(1.0, 10).is_linear_regime(128));
        assert!(!MetaOrderSpec::new(20.0, 10).is_linear_regime(128));
        let s = MetaOrderSpec::new(1.5, 3);
        assert_eq!((s.demand_at(0), s.demand_at(2), s.demand_at(3)), (1.5, 1.5, 0.0));
    }

    #[test]
    fn baseline_window_floor() {
        let mut st = producers_only(8);
        assert!(measure_baseline(&mut st, 799).is_err());
        assert!(measure_baseline(&mut st, 800).is_ok());
    }

    #[test]
    fn producers_only_baseline_and_jump() {
        let patterns = 8;
        let mut st = producers_only(patterns);
        let pa: Vec<f64> = st.book().producer_aggregate().iter().map(|&x| x as f64).collect();
        let expected = pa.iter().sum::<f64>() / patterns as f64;
        let baseline = measure_baseline(&mut st, 200_000).unwrap();
        // sampling noise of the pattern frequencies only
        let spread = (pa.iter().map(|x| (x - expected).powi(2)).sum::<f64>() / patterns as f64).sqrt();
        assert!((baseline - expected).abs() < 4.0 * spread / (200_000f64).sqrt() + 1e-12);

        let spec = MetaOrderSpec::new(2.0, 5);
        let traj = run_with_metaorder(&mut st, &spec, 12, expected).unwrap();
        assert_eq!(traj.delta[0], 0.0);
        assert_eq!(traj.delta.len(), 13);
        // nobody adapts: excess is h plus the producer fluctuation
        assert!(traj.excess.iter().take(5).all(|&e| pa.iter().any(|&p| (p - expected + 2.0 - e).abs() < 1e-9)));
        assert!(traj.excess.iter().skip(5).all(|&e| pa.iter().any(|&p| (p - expected - e).abs() < 1e-9)));
        for t in 0..12 {
            assert!((traj.delta[t + 1] - traj.delta[t] - traj.excess[t] / patterns as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn horizon_must_exceed_duration() {
        let mut st = producers_only(4);
        let spec = MetaOrderSpec::new(1.0, 10);
        assert!(run_with_metaorder(&mut st, &spec, 10, 0.0).is_err());
    }

    #[test]
    fn start_offset_delays_the_order() {
        let cfg = GameConfig::new(8, 1.0, 1.0).with_seed(4);
        let mut a = GameState::new(&cfg).unwrap();
        let mut b = GameState::new(&cfg).unwrap();
        let mut spec = MetaOrderSpec::new(1.0, 5);
        spec.start = 3;
        let ta = run_with_metaorder(&mut a, &spec, 20, 0.0).unwrap();
        b.relax(3).unwrap();
        let tb = run_with_metaorder(&mut b, &MetaOrderSpec::new(1.0, 5), 20, 0.0).unwrap();
        assert_eq!(ta, tb);
    }
}
