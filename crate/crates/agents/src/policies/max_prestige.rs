//! Two-step look-ahead on prestige plus power.

use std::cmp::Ordering;
use std::sync::Arc;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tribute_core::{MatchState, Move, PatronId, PlayerView, Seat, SeededGameState};

use super::common::{random_patron, step, turn_over, Scorer};
use crate::config::AgentSettings;
use crate::sdk::Agent;

#[derive(Debug, Clone, Copy, PartialEq)]
struct PathScore {
    won: bool,
    gain: u32,
    /// The path leaves the turn open, so unspent resources can still be used.
    open: bool,
    heuristic: f64,
    /// Tier value of every card owned.
    deck: u32,
}

impl PathScore {
    fn of(state: &MatchState, seat: Seat, turn: u32, scorer: &Scorer) -> Self {
        let p = state.player(seat);
        PathScore {
            won: state.outcome().is_some_and(|o| o.winner == Some(seat)),
            gain: p.prestige + p.power,
            open: !turn_over(state, seat, turn),
            heuristic: scorer.score(state, seat),
            deck: p.owned().map(|c| scorer.tiers.value(c.card)).sum(),
        }
    }

    fn cmp(&self, other: &Self) -> Ordering {
        self.won
            .cmp(&other.won)
            .then(self.gain.cmp(&other.gain))
            .then(self.heuristic.total_cmp(&other.heuristic))
            .then(self.deck.cmp(&other.deck))
            .then(self.open.cmp(&other.open))
    }
}

/// Scores every path of one or two moves and returns the index of the
/// first move of the best one. A move that wins on the spot is taken
/// first, then any winning path. Ties on
/// prestige plus power go to paths that keep the turn going, then to the
/// better heuristic, then to the stronger deck, then to moves other than
/// END_TURN, then to legal order.
pub fn max_prestige_choice(view: &PlayerView, legal: &[Move], seed: u64, scorer: &Scorer) -> usize {
    if legal.len() == 1 {
        return 0;
    }
    let seat = view.seat();
    let root = view.seeded(seed);
    let turn = root.turn();
    let wins_now = |mv: &Move| step(&root, mv).0.outcome().is_some_and(|o| o.winner == Some(seat));
    if let Some(i) = legal.iter().position(wins_now) {
        return i;
    }
    let mut best: Option<(usize, PathScore)> = None;
    for (i, mv) in legal.iter().enumerate() {
        let score = best_path(&root, mv, 2, seat, turn, scorer);
        let better = match &best {
            None => true,
            Some((j, b)) => match score.cmp(b) {
                Ordering::Greater => true,
                Ordering::Equal => legal[*j].is_end_turn() && !mv.is_end_turn(),
                Ordering::Less => false,
            },
        };
        if better {
            if score.won {
                return i;
            }
            best = Some((i, score));
        }
    }
    best.map_or(0, |(i, _)| i)
}

/// Best score over paths starting with `mv` and using at most `steps`
/// moves. Resolving a choice opened by a move is part of that move.
fn best_path(state: &SeededGameState, mv: &Move, steps: u32, seat: Seat, turn: u32, scorer: &Scorer) -> PathScore {
    let (after, _) = step(state, mv);
    let steps = if matches!(mv, Move::MakeChoice(_)) { steps } else { steps.saturating_sub(1) };
    let own = PathScore::of(&after, seat, turn, scorer);
    if turn_over(&after, seat, turn) {
        return own;
    }
    if after.pending_choice().is_some() {
        return after
            .legal_moves()
            .iter()
            .map(|c| best_path(&after, c, steps, seat, turn, scorer))
            .reduce(|x, y| if y.cmp(&x) == Ordering::Greater { y } else { x })
            .unwrap_or(own);
    }
    if steps == 0 {
        return own;
    }
    let mut score = own;
    for next in after.legal_moves() {
        let s = best_path(&after, &next, steps, seat, turn, scorer);
        if s.cmp(&score) == Ordering::Greater {
            score = s;
        }
    }
    score
}

pub struct MaxPrestigeAgent {
    rng: ChaCha8Rng,
    settings: Arc<AgentSettings>,
    scorer: Option<Scorer>,
}

impl MaxPrestigeAgent {
    pub fn new(seed: u64, settings: Arc<AgentSettings>) -> Self {
        MaxPrestigeAgent { rng: ChaCha8Rng::seed_from_u64(seed), settings, scorer: None }
    }
}

impl Agent for MaxPrestigeAgent {
    fn name(&self) -> &str {
        "max-prestige"
    }

    fn select_patron(&mut self, available: &[PatronId], _round: u8) -> PatronId {
        random_patron(available, &mut self.rng)
    }

    fn play(&mut self, view: &PlayerView, legal: &[Move], _remaining: Duration) -> Move {
        let scorer = self.scorer.get_or_insert_with(|| Scorer::new(&self.settings, view));
        let seed = rand::RngCore::next_u64(&mut self.rng);
        legal[max_prestige_choice(view, legal, seed, scorer)].clone()
    }
}
