use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::GameConfig;
use crate::error::{config_err, Result};

/// Fixed (quenched) strategies of one realization.
///
/// Speculator strategies are stored twice: pattern-major for the per-step
/// score update and agent-major for the per-flip cache update.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyBook {
    patterns: usize,
    speculators: usize,
    producers: usize,
    by_pattern: Vec<i8>,
    by_agent: Vec<i8>,
    producer_aggregate: Vec<i64>,
}

impl StrategyBook {
    fn sample(rng: &mut ChaCha8Rng, patterns: usize, speculators: usize, producers: usize) -> Self {
        let mut bits = SignStream::default();
        let mut by_agent = vec![0i8; speculators * patterns];
        for entry in by_agent.iter_mut() {
            *entry = bits.next(rng);
        }
        let mut producer_aggregate = vec![0i64; patterns];
        for _ in 0..producers {
            for agg in producer_aggregate.iter_mut() {
                *agg += bits.next(rng) as i64;
            }
        }
        Self::from_parts(patterns, producers, by_agent, producer_aggregate)
    }

    pub(crate) fn from_parts(
        patterns: usize,
        producers: usize,
        by_agent: Vec<i8>,
        producer_aggregate: Vec<i64>,
    ) -> Self {
        let speculators = by_agent.len() / patterns;
        let mut by_pattern = vec![0i8; speculators * patterns];
        for i in 0..speculators {
            for mu in 0..patterns {
                by_pattern[mu * speculators + i] = by_agent[i * patterns + mu];
            }
        }
        StrategyBook {
            patterns,
            speculators,
            producers,
            by_pattern,
            by_agent,
            producer_aggregate,
        }
    }

    pub fn patterns(&self) -> usize {
        self.patterns
    }

    pub fn num_speculators(&self) -> usize {
        self.speculators
    }

    pub fn num_producers(&self) -> usize {
        self.producers
    }

    /// Strategy `a_i^mu` of speculator `i`.
    pub fn strategy(&self, i: usize, mu: usize) -> i8 {
        self.by_agent[i * self.patterns + mu]
    }

    /// Full strategy vector of speculator `i`, indexed by pattern.
    pub fn agent(&self, i: usize) -> &[i8] {
        &self.by_agent[i * self.patterns..(i + 1) * self.patterns]
    }

    /// Strategies of all speculators for pattern `mu`.
    pub fn pattern_row(&self, mu: usize) -> &[i8] {
        &self.by_pattern[mu * self.speculators..(mu + 1) * self.speculators]
    }

    /// Summed producer demand `A_p^mu` for every pattern.
    pub fn producer_aggregate(&self) -> &[i64] {
        &self.producer_aggregate
    }
}

/// Hands out uniform signs, 64 per generator draw.
#[derive(Default)]
struct SignStream {
    word: u64,
    left: u32,
}

impl SignStream {
    fn next(&mut self, rng: &mut ChaCha8Rng) -> i8 {
        if self.left == 0 {
            self.word = rng.next_u64();
            self.left = 64;
        }
        let bit = self.word & 1;
        self.word >>= 1;
        self.left -= 1;
        if bit == 1 {
            1
        } else {
            -1
        }
    }
}

/// Outcome of a single time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// Pattern drawn this step, zero-based.
    pub mu: usize,
    /// Integer part of the excess demand: producers plus active speculators.
    pub demand: i64,
    /// External (meta-order) demand added on top of `demand`.
    pub external: f64,
    /// Speculators trading this step.
    pub n_active: usize,
}

impl StepRecord {
    /// Total excess demand `A(t)` seen by the market and by the score update.
    pub fn excess_demand(&self) -> f64 {
        self.demand as f64 + self.external
    }
}

/// Mutable state of one realization of the grand-canonical game.
#[derive(Debug, Clone)]
pub struct GameState {
    config: GameConfig,
    book: StrategyBook,
    scores: Vec<f64>,
    active: Vec<bool>,
    per_mu_active_sum: Vec<i64>,
    n_active: usize,
    t: u64,
    rng: ChaCha8Rng,
    flipped: Vec<usize>,
}

impl GameState {
    /// Draws the strategies of a fresh realization and zeroes all scores.
    pub fn new(config: &GameConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(config.stream);
        let book = StrategyBook::sample(
            &mut rng,
            config.patterns,
            config.num_speculators(),
            config.num_producers(),
        );
        let scores = vec![0.0; book.speculators];
        Ok(Self::assemble(config.clone(), book, scores, 0, rng))
    }

    pub(crate) fn assemble(
        config: GameConfig,
        book: StrategyBook,
        scores: Vec<f64>,
        t: u64,
        rng: ChaCha8Rng,
    ) -> Self {
        let active: Vec<bool> = scores.iter().map(|&u| u >= 0.0).collect();
        let mut state = GameState {
            config,
            per_mu_active_sum: vec![0; book.patterns],
            n_active: active.iter().filter(|&&a| a).count(),
            book,
            scores,
            active,
            t,
            rng,
            flipped: Vec::new(),
        };
        state.per_mu_active_sum = state.recompute_active_sums();
        state
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn book(&self) -> &StrategyBook {
        &self.book
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    pub fn n_active(&self) -> usize {
        self.n_active
    }

    pub fn per_mu_active_sum(&self) -> &[i64] {
        &self.per_mu_active_sum
    }

    pub fn time(&self) -> u64 {
        self.t
    }

    pub fn patterns(&self) -> usize {
        self.book.patterns
    }

    pub(crate) fn rng(&self) -> &ChaCha8Rng {
        &self.rng
    }

    /// Brute-force `sum_i a_i^mu phi_i` for every pattern.
    pub fn recompute_active_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.book.patterns];
        for (i, _) in self.active.iter().enumerate().filter(|(_, &a)| a) {
            for (sum, &a) in sums.iter_mut().zip(self.book.agent(i)) {
                *sum += a as i64;
            }
        }
        sums
    }

    /// Overwrites one speculator's score, keeping flags and cache coherent.
    ///
    /// A score of `f64::NEG_INFINITY` removes the speculator permanently.
    pub fn set_score(&mut self, i: usize, score: f64) {
        self.scores[i] = score;
        let now = score >= 0.0;
        if now != self.active[i] {
            self.active[i] = now;
            self.apply_flip(i, now);
        }
    }

    /// One unperturbed iteration.
    pub fn step(&mut self) -> StepRecord {
        self.step_with_demand(0.0)
    }

    /// One iteration with `external` added to the excess demand. Speculators
    /// score against the perturbed total.
    pub fn step_with_demand(&mut self, external: f64) -> StepRecord {
        let mu = self.rng.random_range(0..self.book.patterns as u32) as usize;
        let demand = self.book.producer_aggregate[mu] + self.per_mu_active_sum[mu];
        let record = StepRecord {
            mu,
            demand,
            external,
            n_active: self.n_active,
        };
        let total = record.excess_demand();

        self.flipped.clear();
        let row = &self.book.by_pattern[mu * self.book.speculators..(mu + 1) * self.book.speculators];
        for (i, ((u, act), &a)) in self
            .scores
            .iter_mut()
            .zip(self.active.iter_mut())
            .zip(row)
            .enumerate()
        {
            *u -= a as f64 * total;
            let now = *u >= 0.0;
            if now != *act {
                *act = now;
                self.flipped.push(i);
            }
        }
        for k in 0..self.flipped.len() {
            let i = self.flipped[k];
            self.apply_flip(i, self.active[i]);
        }
        self.t += 1;
        record
    }

    fn apply_flip(&mut self, i: usize, now_active: bool) {
        let agent = &self.book.by_agent[i * self.book.patterns..(i + 1) * self.book.patterns];
        if now_active {
            self.n_active += 1;
            for (sum, &a) in self.per_mu_active_sum.iter_mut().zip(agent) {
                *sum += a as i64;
            }
        } else {
            self.n_active -= 1;
            for (sum, &a) in self.per_mu_active_sum.iter_mut().zip(agent) {
                *sum -= a as i64;
            }
        }
    }

    /// Runs `steps` unperturbed iterations and discards the records.
    pub fn relax(&mut self, steps: u64) -> Result<()> {
        if steps == 0 {
            return config_err("relaxation needs at least one step");
        }
        for _ in 0..steps {
            self.step();
        }
        Ok(())
    }

    /// Relaxes for the configured burn-in length.
    pub fn burn_in(&mut self) -> Result<()> {
        self.relax(self.config.burn_in_steps)
    }
}
