//! What a single player may know, and seed-completed states for simulation.

use std::ops::Deref;

use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::events::{Event, EventSink};
use crate::moves::Move;
use crate::rules::RulesError;
use crate::state::{CardInstance, MatchRng, MatchState, PlayerBoard, Seat};

/// A match as seen by one seat.
///
/// Hidden zones are canonicalized: the viewer's draw pile is sorted by card
/// name, the opponent's hand and draw pile are merged into one sorted pool,
/// and the tavern pile is sorted. The random generator is blanked.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerView {
    seat: Seat,
    state: MatchState,
    opponent_pool: Vec<CardInstance>,
    opponent_hand_size: usize,
}

impl MatchState {
    pub fn view(&self, seat: Seat) -> PlayerView {
        let mut state = self.clone();
        let by_name = |cards: &mut Vec<CardInstance>| {
            cards.sort_by(|a, b| {
                let (na, nb) = (self.spec(a.card).name.as_bytes(), self.spec(b.card).name.as_bytes());
                na.cmp(nb).then(a.id.cmp(&b.id))
            })
        };
        by_name(&mut state.players[seat.index()].draw_pile);
        let opp = &mut state.players[seat.other().index()];
        let opponent_hand_size = opp.hand.len();
        let mut opponent_pool = std::mem::take(&mut opp.hand);
        opponent_pool.append(&mut opp.draw_pile);
        by_name(&mut opponent_pool);
        by_name(&mut state.tavern_pile);
        state.rng = MatchRng::seed_from_u64(0);
        if seat != self.current {
            state.pending = None;
            state.effects.clear();
        }
        PlayerView { seat, state, opponent_pool, opponent_hand_size }
    }
}

impl PlayerView {
    pub fn seat(&self) -> Seat {
        self.seat
    }

    /// The redacted state. Hidden zones read as described on [`PlayerView`];
    /// the opponent's hand and draw pile are empty here, see
    /// [`PlayerView::opponent_pool`].
    pub fn state(&self) -> &MatchState {
        &self.state
    }

    pub fn me(&self) -> &PlayerBoard {
        self.state.player(self.seat)
    }

    pub fn opponent(&self) -> &PlayerBoard {
        self.state.player(self.seat.other())
    }

    pub fn is_my_turn(&self) -> bool {
        self.state.current_seat() == self.seat
    }

    /// The opponent's hand and draw pile, merged and sorted by name.
    pub fn opponent_pool(&self) -> &[CardInstance] {
        &self.opponent_pool
    }

    pub fn opponent_hand_size(&self) -> usize {
        self.opponent_hand_size
    }

    /// Legal moves for the viewer; empty when it is not the viewer's turn.
    pub fn legal_moves(&self) -> Vec<Move> {
        if self.is_my_turn() {
            self.state.legal_moves()
        } else {
            Vec::new()
        }
    }

    /// Fabricates a complete state consistent with this view: the viewer's
    /// draw order, the opponent's hand/draw split and order, and the tavern
    /// pile order are all drawn from a generator seeded with `seed`.
    pub fn seeded(&self, seed: u64) -> SeededGameState {
        let mut rng = MatchRng::seed_from_u64(seed);
        let mut state = self.state.clone();
        state.players[self.seat.index()].draw_pile.shuffle(&mut rng);
        let mut pool = self.opponent_pool.clone();
        pool.shuffle(&mut rng);
        let hand_size = self.opponent_hand_size.min(pool.len());
        let opp = &mut state.players[self.seat.other().index()];
        opp.draw_pile = pool.split_off(hand_size);
        opp.hand = pool;
        state.tavern_pile.shuffle(&mut rng);
        state.rng = rng;
        SeededGameState(state)
    }
}

/// A complete state suitable for forward simulation. Its hidden zones are
/// one sample consistent with some player's knowledge.
#[derive(Debug, Clone, PartialEq)]
pub struct SeededGameState(MatchState);

impl SeededGameState {
    /// Wraps a full state as-is, e.g. to simulate with perfect information.
    pub fn from_full_state(state: MatchState) -> Self {
        SeededGameState(state)
    }

    pub fn into_inner(self) -> MatchState {
        self.0
    }

    /// Applies a move to a copy, leaving `self` untouched.
    pub fn simulate(&self, mv: &Move) -> Result<(SeededGameState, Vec<Event>), RulesError> {
        let (next, events) = self.0.apply(mv)?;
        Ok((SeededGameState(next), events))
    }

    pub fn apply_in_place(&mut self, mv: &Move, sink: &mut impl EventSink) -> Result<(), RulesError> {
        self.0.apply_move(mv, sink)
    }
}

impl Deref for SeededGameState {
    type Target = MatchState;

    fn deref(&self) -> &MatchState {
        &self.0
    }
}
