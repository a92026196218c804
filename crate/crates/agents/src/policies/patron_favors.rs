//! Chases patron favor above everything else.

use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tribute_core::{MatchState, Move, PatronId, PlayerView, Seat};

use super::common::{random_patron, step};
use super::random::random_policy;
use crate::sdk::Agent;

fn wants(state: &MatchState, seat: Seat, mv: &Move) -> bool {
    match mv {
        Move::ActivatePatron(p) => *p != PatronId::Treasury && !state.patron(*p).is_some_and(|s| s.favors(seat)),
        _ => false,
    }
}

/// Activates a patron not yet favoring the agent when possible. Otherwise
/// looks one move ahead for a move that makes such an activation
/// possible, and falls back to [`random_policy`].
pub fn patron_favors_choice(view: &PlayerView, legal: &[Move], seed: u64, rng: &mut impl rand::Rng) -> usize {
    let state = view.state();
    let seat = view.seat();
    if let Some(i) = legal.iter().position(|m| wants(state, seat, m)) {
        return i;
    }
    if state.pending_choice().is_none() && view.is_my_turn() {
        let root = view.seeded(seed);
        for (i, mv) in legal.iter().enumerate() {
            if mv.is_end_turn() {
                continue;
            }
            let (after, _) = step(&root, mv);
            if after.current_seat() == seat && after.legal_moves().iter().any(|m| wants(&after, seat, m)) {
                return i;
            }
        }
    }
    random_policy(legal, rng)
}

pub struct PatronFavorsAgent {
    rng: ChaCha8Rng,
}

impl PatronFavorsAgent {
    pub fn new(seed: u64) -> Self {
        PatronFavorsAgent { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Agent for PatronFavorsAgent {
    fn name(&self) -> &str {
        "patron-favors"
    }

    fn select_patron(&mut self, available: &[PatronId], _round: u8) -> PatronId {
        random_patron(available, &mut self.rng)
    }

    fn play(&mut self, view: &PlayerView, legal: &[Move], _remaining: Duration) -> Move {
        let seed = rand::RngCore::next_u64(&mut self.rng);
        legal[patron_favors_choice(view, legal, seed, &mut self.rng)].clone()
    }
}
