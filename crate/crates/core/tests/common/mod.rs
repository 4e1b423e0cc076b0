#![allow(dead_code)]

use mgimpact::game::{GameConfig, GameState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Straightforward reimplementation of the update rule: every step sums
/// all speculators from scratch.
pub struct NaiveGame {
    patterns: usize,
    strategies: Vec<Vec<i8>>,
    producers: Vec<i64>,
    pub scores: Vec<f64>,
}

impl NaiveGame {
    pub fn mirror(state: &GameState) -> Self {
        let book = state.book();
        NaiveGame {
            patterns: state.patterns(),
            strategies: (0..book.num_speculators()).map(|i| book.agent(i).to_vec()).collect(),
            producers: book.producer_aggregate().to_vec(),
            scores: state.scores().to_vec(),
        }
    }

    pub fn demand(&self, mu: usize) -> i64 {
        let active: i64 = self
            .strategies
            .iter()
            .zip(&self.scores)
            .filter(|(_, &u)| u >= 0.0)
            .map(|(s, _)| s[mu] as i64)
            .sum();
        self.producers[mu] + active
    }

    pub fn step(&mut self, mu: usize, external: f64) -> i64 {
        assert!(mu < self.patterns);
        let demand = self.demand(mu);
        let total = demand as f64 + external;
        for (s, u) in self.strategies.iter().zip(self.scores.iter_mut()) {
            *u -= s[mu] as f64 * total;
        }
        demand
    }
}

/// Runs `steps` random steps on the engine and the naive game side by
/// side, with random external demand. Returns the first mismatch.
pub fn cache_coherence(patterns: usize, n_s: f64, seed: u64, steps: usize) -> Result<(), String> {
    let cfg = GameConfig::new(patterns, n_s, 1.0).with_seed(seed);
    let mut engine = GameState::new(&cfg).map_err(|e| e.to_string())?;
    let mut naive = NaiveGame::mirror(&engine);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for t in 0..steps {
        let external = if rng.random_bool(0.3) { rng.random_range(-3.0..3.0) } else { 0.0 };
        let rec = engine.step_with_demand(external);
        let want = naive.step(rec.mu, external);
        if rec.demand != want {
            return Err(format!("step {t}: demand {} vs {want}", rec.demand));
        }
        if engine.scores() != naive.scores.as_slice() {
            return Err(format!("step {t}: scores diverge"));
        }
        if engine.per_mu_active_sum() != engine.recompute_active_sums().as_slice() {
            return Err(format!("step {t}: cached activity sums are stale"));
        }
        let n_active = naive.scores.iter().filter(|&&u| u >= 0.0).count();
        if engine.n_active() != n_active {
            return Err(format!("step {t}: {} active vs {n_active}", engine.n_active()));
        }
    }
    Ok(())
}
