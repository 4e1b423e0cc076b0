//! Stationary-state observables measured on a running game.

use super::state::GameState;
use crate::error::{Error, Result};

/// Minimum number of steps per pattern for conditional averages.
pub const MIN_STEPS_PER_PATTERN: u64 = 10;

/// Running per-pattern sums of the excess demand.
#[derive(Debug, Clone)]
pub struct ConditionalAccumulator {
    sums: Vec<f64>,
    counts: Vec<u64>,
}

impl ConditionalAccumulator {
    pub fn new(patterns: usize) -> Self {
        ConditionalAccumulator {
            sums: vec![0.0; patterns],
            counts: vec![0; patterns],
        }
    }

    pub fn push(&mut self, mu: usize, demand: f64) {
        self.sums[mu] += demand;
        self.counts[mu] += 1;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Per-pattern means; unvisited patterns report 0.
    pub fn means(&self) -> Vec<f64> {
        self.sums
            .iter()
            .zip(&self.counts)
            .map(|(&s, &c)| if c == 0 { 0.0 } else { s / c as f64 })
            .collect()
    }

    pub fn into_conditional_means(self) -> ConditionalMeans {
        ConditionalMeans {
            means: self.means(),
            counts: self.counts,
        }
    }
}

/// Sample estimate of `<A | mu>` for every pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalMeans {
    pub means: Vec<f64>,
    pub counts: Vec<u64>,
}

impl ConditionalMeans {
    /// Patterns that were never drawn during the window.
    pub fn unvisited(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(mu, _)| mu)
            .collect()
    }

    /// Naive `(1/P) sum_mu mean_mu^2`.
    pub fn mean_square(&self) -> f64 {
        self.means.iter().map(|m| m * m).sum::<f64>() / self.means.len() as f64
    }
}

/// Predictability estimate with and without finite-window bias correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Predictability {
    /// Split-half cross product, clamped at zero.
    pub corrected: f64,
    /// Split-half cross product before clamping; may be slightly negative.
    pub cross: f64,
    /// Squared full-window means; biased upward by roughly `var(A) P / window`.
    pub naive: f64,
}

impl Predictability {
    pub fn value(&self) -> f64 {
        self.corrected
    }

    /// Cross-product estimator from two independent halves of a window.
    pub fn from_halves(first: &ConditionalAccumulator, second: &ConditionalAccumulator) -> Self {
        let patterns = first.sums.len();
        let m1 = first.means();
        let m2 = second.means();
        let cross = m1.iter().zip(&m2).map(|(a, b)| a * b).sum::<f64>() / patterns as f64;
        let mut full = ConditionalAccumulator::new(patterns);
        for mu in 0..patterns {
            full.sums[mu] = first.sums[mu] + second.sums[mu];
            full.counts[mu] = first.counts[mu] + second.counts[mu];
        }
        let naive = full.into_conditional_means().mean_square();
        Predictability {
            corrected: cross.max(0.0),
            cross,
            naive,
        }
    }
}

fn check_window(state: &GameState, window: u64) -> Result<()> {
    let min = MIN_STEPS_PER_PATTERN * state.patterns() as u64;
    if window < min {
        return Err(Error::Measurement(format!(
            "window of {window} steps is shorter than {min} ({MIN_STEPS_PER_PATTERN} per pattern)"
        )));
    }
    Ok(())
}

impl GameState {
    /// Runs `window` unperturbed steps and returns the per-pattern mean
    /// excess demand.
    pub fn conditional_mean_demand(&mut self, window: u64) -> Result<ConditionalMeans> {
        check_window(self, window)?;
        let mut acc = ConditionalAccumulator::new(self.patterns());
        for _ in 0..window {
            let rec = self.step();
            acc.push(rec.mu, rec.excess_demand());
        }
        Ok(acc.into_conditional_means())
    }

    /// Runs `window` unperturbed steps and estimates the predictability
    /// `H = (1/P) sum_mu <A|mu>^2` from the two halves of the window.
    pub fn measure_predictability(&mut self, window: u64) -> Result<Predictability> {
        check_window(self, window)?;
        let half = window / 2;
        let mut first = ConditionalAccumulator::new(self.patterns());
        let mut second = ConditionalAccumulator::new(self.patterns());
        for k in 0..window {
            let rec = self.step();
            let acc = if k < half { &mut first } else { &mut second };
            acc.push(rec.mu, rec.excess_demand());
        }
        Ok(Predictability::from_halves(&first, &second))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameConfig;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_means_give_zero() {
        let a = ConditionalAccumulator::new(4);
        let b = ConditionalAccumulator::new(4);
        let h = Predictability::from_halves(&a, &b);
        assert_eq!(h.value(), 0.0);
        assert_eq!(h.naive, 0.0);
    }

    #[test]
    fn short_window_is_rejected() {
        let mut st = GameState::new(&GameConfig::new(16, 1.0, 1.0)).unwrap();
        assert!(matches!(st.conditional_mean_demand(159), Err(Error::Measurement(_))));
        assert!(st.measure_predictability(10).is_err());
        assert!(st.conditional_mean_demand(160).is_ok());
    }

    #[test]
    fn producers_only_means_are_exact() {
        let cfg = GameConfig::new(8, 1.0, 1.0).with_seed(3);
        let mut st = GameState::new(&cfg).unwrap();
        for i in 0..st.book().num_speculators() {
            st.set_score(i, f64::NEG_INFINITY);
        }
        let cm = st.conditional_mean_demand(800).unwrap();
        assert!(cm.unvisited().is_empty());
        for (m, &p) in cm.means.iter().zip(st.book().producer_aggregate()) {
            assert_eq!(*m, p as f64);
        }
    }

    /// White noise with no pattern dependence: the naive estimator sits at
    /// sigma^2 P / window, the split-half one at zero.
    #[test]
    fn split_half_removes_white_noise_bias() {
        let patterns = 32;
        let window = 3200u64;
        let sigma2 = 4.0;
        let reps = 400;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (mut naive, mut cross) = (0.0, 0.0);
        for _ in 0..reps {
            let mut first = ConditionalAccumulator::new(patterns);
            let mut second = ConditionalAccumulator::new(patterns);
            for k in 0..window {
                let mu = rng.random_range(0..patterns);
                let a = if rng.random::<bool>() { 2.0 } else { -2.0 };
                if k < window / 2 {
                    first.push(mu, a);
                } else {
                    second.push(mu, a);
                }
            }
            let h = Predictability::from_halves(&first, &second);
            naive += h.naive;
            cross += h.cross;
        }
        naive /= reps as f64;
        cross /= reps as f64;
        let expected = sigma2 * patterns as f64 / window as f64;
        assert!((naive - expected).abs() < 0.1 * expected, "naive {naive} vs {expected}");
        assert!(cross.abs() < 0.1 * expected, "cross {cross}");
    }
}
