//! Random baselines.

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tribute_core::{Move, PatronId, PlayerView};

use super::common::random_patron;
use crate::sdk::Agent;

/// Uniform over every legal move except END_TURN, which is taken only
/// when nothing else is legal. Returns an index into `legal`.
pub fn random_policy(legal: &[Move], rng: &mut impl Rng) -> usize {
    let others = legal.iter().filter(|m| !m.is_end_turn()).count();
    if others == 0 {
        return 0;
    }
    let k = rng.gen_range(0..others);
    legal
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_end_turn())
        .nth(k)
        .map(|(i, _)| i)
        .expect("k is in range")
}

pub struct RandomAgent {
    rng: ChaCha8Rng,
}

impl RandomAgent {
    pub fn new(seed: u64) -> Self {
        RandomAgent { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Agent for RandomAgent {
    fn name(&self) -> &str {
        "random"
    }

    fn select_patron(&mut self, available: &[PatronId], _round: u8) -> PatronId {
        random_patron(available, &mut self.rng)
    }

    fn play(&mut self, _view: &PlayerView, legal: &[Move], _remaining: Duration) -> Move {
        legal[random_policy(legal, &mut self.rng)].clone()
    }
}

/// Uniform over all legal moves, END_TURN included.
pub struct FullyRandomAgent {
    rng: ChaCha8Rng,
}

impl FullyRandomAgent {
    pub fn new(seed: u64) -> Self {
        FullyRandomAgent { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Agent for FullyRandomAgent {
    fn name(&self) -> &str {
        "fully-random"
    }

    fn select_patron(&mut self, available: &[PatronId], _round: u8) -> PatronId {
        random_patron(available, &mut self.rng)
    }

    fn play(&mut self, _view: &PlayerView, legal: &[Move], _remaining: Duration) -> Move {
        legal[self.rng.gen_range(0..legal.len())].clone()
    }
}
