use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::config::GameConfig;
use super::state::{GameState, StrategyBook};
use crate::error::{Error, Result};

pub const SNAPSHOT_VERSION: u32 = 1;

/// Serializable image of a [`GameState`], for debugging and replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSnapshot {
    pub version: u32,
    pub config: GameConfig,
    pub num_producers: usize,
    /// Agent-major speculator strategies.
    pub strategies: Vec<i8>,
    pub producer_aggregate: Vec<i64>,
    pub scores: Vec<f64>,
    pub t: u64,
    pub rng_seed: [u8; 32],
    pub rng_stream: u64,
    /// Word position of the generator, as a decimal string (u128).
    pub rng_word_pos: String,
}

impl GameState {
    pub fn snapshot(&self) -> Result<GameSnapshot> {
        if self.scores().iter().any(|u| !u.is_finite()) {
            return Err(Error::Config("cannot snapshot non-finite scores".into()));
        }
        let book = self.book();
        let strategies = (0..book.num_speculators())
            .flat_map(|i| book.agent(i).iter().copied())
            .collect();
        Ok(GameSnapshot {
            version: SNAPSHOT_VERSION,
            config: self.config().clone(),
            num_producers: book.num_producers(),
            strategies,
            producer_aggregate: book.producer_aggregate().to_vec(),
            scores: self.scores().to_vec(),
            t: self.time(),
            rng_seed: self.rng().get_seed(),
            rng_stream: self.rng().get_stream(),
            rng_word_pos: self.rng().get_word_pos().to_string(),
        })
    }

    pub fn restore(snap: &GameSnapshot) -> Result<Self> {
        if snap.version != SNAPSHOT_VERSION {
            return Err(Error::Config(format!("unsupported snapshot version {}", snap.version)));
        }
        snap.config.validate()?;
        let p = snap.config.patterns;
        if snap.producer_aggregate.len() != p
            || snap.strategies.len() != snap.scores.len() * p
            || snap.strategies.iter().any(|&a| a != 1 && a != -1)
        {
            return Err(Error::Config("snapshot tables are inconsistent".into()));
        }
        let word_pos: u128 = snap
            .rng_word_pos
            .parse()
            .map_err(|_| Error::Config("bad generator position in snapshot".into()))?;
        let mut rng = ChaCha8Rng::from_seed(snap.rng_seed);
        rng.set_stream(snap.rng_stream);
        rng.set_word_pos(word_pos);
        let book = StrategyBook::from_parts(
            p,
            snap.num_producers,
            snap.strategies.clone(),
            snap.producer_aggregate.clone(),
        );
        Ok(GameState::assemble(snap.config.clone(), book, snap.scores.clone(), snap.t, rng))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.snapshot()?)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let snap: GameSnapshot = serde_json::from_str(json)?;
        Self::restore(&snap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_resumes_identically() {
        let cfg = GameConfig::new(16, 1.0, 1.0).with_seed(8).with_stream(3);
        let mut a = GameState::new(&cfg).unwrap();
        a.relax(500).unwrap();
        let mut b = GameState::from_json(&a.to_json().unwrap()).unwrap();
        assert_eq!(a.snapshot().unwrap(), b.snapshot().unwrap());
        for _ in 0..500 {
            assert_eq!(a.step(), b.step());
        }
        assert_eq!(a.per_mu_active_sum(), b.per_mu_active_sum());
    }

    #[test]
    fn rejects_wrong_version() {
        let st = GameState::new(&GameConfig::new(4, 1.0, 1.0)).unwrap();
        let mut snap = st.snapshot().unwrap();
        snap.version = 99;
        assert!(GameState::restore(&snap).is_err());
    }
}
