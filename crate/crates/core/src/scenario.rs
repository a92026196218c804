//! Builder for hand-crafted positions.
//!
//! Starts from an empty table (no cards anywhere, all patrons neutral) and
//! lets the caller place cards by id. Every placed card is a fresh
//! instance, so built states satisfy the same invariants as real matches.
//! Unknown card ids panic.

use std::sync::Arc;

use crate::cards::{CardSet, PatronId};
use crate::rules::RulesError;
use crate::state::{CardInstance, Endgame, Favor, MatchState, PlayerBoard, Seat};

pub struct Scenario {
    state: MatchState,
}

impl Scenario {
    pub fn new(cards: Arc<CardSet>, picks: [PatronId; 4], seed: u64) -> Result<Scenario, RulesError> {
        let mut state = MatchState::new(cards, picks, seed)?;
        state.players = [PlayerBoard::default(), PlayerBoard::default()];
        state.players[0].patron_calls = 1;
        state.tavern.clear();
        state.tavern_pile.clear();
        state.removed.clear();
        state.next_instance = 0;
        Ok(Scenario { state })
    }

    fn make(&mut self, ids: &[&str]) -> Vec<CardInstance> {
        ids.iter()
            .map(|id| {
                let card = self.state.cards.lookup(id).unwrap_or_else(|| panic!("unknown card id `{id}`"));
                self.state.fresh_instance(card)
            })
            .collect()
    }

    pub fn hand(mut self, seat: Seat, ids: &[&str]) -> Self {
        let cards = self.make(ids);
        self.state.players[seat.index()].hand.extend(cards);
        self
    }

    /// Listed top first.
    pub fn draw_pile(mut self, seat: Seat, ids: &[&str]) -> Self {
        let mut cards = self.make(ids);
        cards.reverse();
        let pile = &mut self.state.players[seat.index()].draw_pile;
        cards.append(pile);
        *pile = cards;
        self
    }

    pub fn cooldown(mut self, seat: Seat, ids: &[&str]) -> Self {
        let cards = self.make(ids);
        self.state.players[seat.index()].cooldown.extend(cards);
        self
    }

    pub fn played(mut self, seat: Seat, ids: &[&str]) -> Self {
        let cards = self.make(ids);
        self.state.players[seat.index()].played.extend(cards);
        self
    }

    /// Agents enter at full health and unused.
    pub fn board(mut self, seat: Seat, ids: &[&str]) -> Self {
        let mut cards = self.make(ids);
        for c in &mut cards {
            c.health = self.state.spec(c.card).health.unwrap_or(1);
        }
        self.state.players[seat.index()].board.extend(cards);
        self
    }

    /// Lowers the health of the agent at `index` on `seat`'s board.
    pub fn damage(mut self, seat: Seat, index: usize, amount: u8) -> Self {
        let agent = &mut self.state.players[seat.index()].board[index];
        agent.health = agent.health.saturating_sub(amount).max(1);
        self
    }

    /// Marks every agent on `seat`'s board as already used this turn.
    pub fn exhaust_board(mut self, seat: Seat) -> Self {
        for agent in &mut self.state.players[seat.index()].board {
            agent.activated = true;
        }
        self
    }

    pub fn tavern(mut self, ids: &[&str]) -> Self {
        let cards = self.make(ids);
        self.state.tavern.extend(cards);
        self
    }

    /// Listed top first.
    pub fn tavern_pile(mut self, ids: &[&str]) -> Self {
        let mut cards = self.make(ids);
        cards.reverse();
        cards.append(&mut self.state.tavern_pile);
        self.state.tavern_pile = cards;
        self
    }

    pub fn resources(mut self, seat: Seat, coins: u32, power: u32, prestige: u32) -> Self {
        let p = &mut self.state.players[seat.index()];
        p.coins = coins;
        p.power = power;
        p.prestige = prestige;
        p.prestige_at_turn_start = prestige;
        self
    }

    pub fn patron_calls(mut self, seat: Seat, calls: u32) -> Self {
        self.state.players[seat.index()].patron_calls = calls;
        self
    }

    pub fn owed_discard(mut self, seat: Seat, n: u32) -> Self {
        self.state.players[seat.index()].owed_discard = n;
        self
    }

    pub fn favor(mut self, patron: PatronId, favor: Favor) -> Self {
        if let Some(p) = self.state.patrons.iter_mut().find(|p| p.patron == patron) {
            p.favor = favor;
        }
        self
    }

    /// Makes `seat` the player to move, with one patron call.
    pub fn to_move(mut self, seat: Seat) -> Self {
        self.state.current = seat;
        self.state.players[seat.index()].patron_calls = self.state.players[seat.index()].patron_calls.max(1);
        self
    }

    pub fn turn(mut self, turn: u32) -> Self {
        self.state.turn = turn;
        self
    }

    pub fn endgame(mut self, endgame: Endgame) -> Self {
        self.state.endgame = endgame;
        self
    }

    pub fn build(self) -> MatchState {
        self.state
    }
}
