//! Pieces shared by several policies.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use tribute_core::{EventSink, MatchState, Move, PatronId, PlayerView, SeededGameState, Seat};

use crate::config::AgentSettings;
use crate::heuristic::evaluate;
use crate::tiers::TierList;
use crate::WeightSet;

/// Uniform pick from the offered patrons.
pub fn random_patron(available: &[PatronId], rng: &mut impl Rng) -> PatronId {
    *available.choose(rng).expect("draft pool is never empty")
}

/// Whether the searching player's turn is over in `state`.
pub fn turn_over(state: &MatchState, seat: Seat, turn: u32) -> bool {
    state.is_finished() || state.turn() != turn || state.current_seat() != seat
}

/// Heuristic scorer bound to one card set.
#[derive(Debug, Clone)]
pub struct Scorer {
    pub weights: WeightSet,
    pub tiers: TierList,
}

impl Scorer {
    pub fn new(settings: &AgentSettings, view: &PlayerView) -> Self {
        let cards = view.state().cards();
        let tiers = settings
            .tier_overrides
            .as_deref()
            .and_then(|t| TierList::with_overrides(cards, t).ok())
            .unwrap_or_else(|| TierList::from_card_set(cards));
        Scorer { weights: settings.weights, tiers }
    }

    pub fn score(&self, state: &MatchState, seat: Seat) -> f64 {
        evaluate(state, seat, &self.weights, &self.tiers)
    }
}

/// Records whether applying a move exposed hidden information or opened
/// a choice.
#[derive(Debug, Default)]
pub struct Surprise(pub bool);

impl EventSink for Surprise {
    fn emit(&mut self, event: tribute_core::Event) {
        if event.is_random() || matches!(event, tribute_core::Event::ChoiceOpen { .. }) {
            self.0 = true;
        }
    }
}

/// Applies `mv` to a copy and reports whether the result is a surprise.
pub fn step(state: &SeededGameState, mv: &Move) -> (SeededGameState, bool) {
    let mut next = state.clone();
    let mut probe = Surprise::default();
    next.apply_in_place(mv, &mut probe).expect("simulated move is legal");
    (next, probe.0)
}

/// A planned sequence of moves, valid until its first surprising move has
/// been played.
#[derive(Debug, Clone, Default)]
pub struct CachedLine {
    turn: u32,
    moves: VecDeque<Move>,
}

impl CachedLine {
    /// Keeps `line` up to and including the first surprising move, after
    /// skipping the first entry (which the caller plays right away).
    pub fn store(&mut self, turn: u32, line: &[(Move, bool)]) {
        self.turn = turn;
        self.moves.clear();
        if line.first().is_none_or(|(_, surprise)| *surprise) {
            return;
        }
        for (mv, surprise) in &line[1..] {
            self.moves.push_back(mv.clone());
            if *surprise {
                break;
            }
        }
    }

    pub fn clear(&mut self) {
        self.moves.clear();
    }

    /// The next planned move, if the plan still applies.
    pub fn next(&mut self, turn: u32, legal: &[Move]) -> Option<Move> {
        if self.turn != turn {
            self.moves.clear();
            return None;
        }
        match self.moves.pop_front() {
            Some(mv) if legal.contains(&mv) => Some(mv),
            _ => {
                self.moves.clear();
                None
            }
        }
    }
}

/// Draws the determinization seed for one decision.
pub fn determinize(view: &PlayerView, rng: &mut impl RngCore) -> SeededGameState {
    view.seeded(rng.next_u64())
}
