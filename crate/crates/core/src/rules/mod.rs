//! The rules engine: setup, legal moves and move application.

mod choices;
mod effects;
mod patrons;
mod turn;

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use thiserror::Error;

use crate::cards::{CardSet, PatronId};
use crate::events::{Event, EventSink, NoEvents, PlaySource};
use crate::moves::Move;
use crate::state::{
    Endgame, Favor, MatchRng, MatchState, PatronState, PlayerBoard, Seat, HAND_SIZE, TAVERN_SIZE,
};

pub use choices::choice_selections;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RulesError {
    #[error("invalid patron draft: {0}")]
    InvalidDraft(String),
    #[error("the match is already finished")]
    MatchFinished,
    #[error("illegal move `{mv}`: {reason}")]
    IllegalMove { mv: Move, reason: &'static str },
}

fn illegal(mv: &Move, reason: &'static str) -> RulesError {
    RulesError::IllegalMove { mv: mv.clone(), reason }
}

/// Number of Gold cards in each starting deck.
pub const STARTING_GOLD: usize = 6;

impl MatchState {
    /// Sets up a match: starting decks, opening hands, tavern and patrons.
    ///
    /// `picks` are the four drafted patrons in draft order. All shuffles
    /// draw from a generator seeded with `seed`.
    pub fn new(cards: Arc<CardSet>, picks: [PatronId; 4], seed: u64) -> Result<MatchState, RulesError> {
        for (i, p) in picks.iter().enumerate() {
            if *p == PatronId::Treasury {
                return Err(RulesError::InvalidDraft("the Treasury cannot be drafted".into()));
            }
            if picks[..i].contains(p) {
                return Err(RulesError::InvalidDraft(format!("{p} picked twice")));
            }
        }
        let mut state = MatchState {
            cards: Arc::clone(&cards),
            players: [PlayerBoard::default(), PlayerBoard::default()],
            current: Seat::First,
            patrons: picks
                .iter()
                .map(|&patron| PatronState { patron, favor: Favor::Neutral })
                .chain(std::iter::once(PatronState { patron: PatronId::Treasury, favor: Favor::None }))
                .collect(),
            turn: 1,
            combo: [0; 7],
            used: Vec::new(),
            tavern: Vec::with_capacity(TAVERN_SIZE),
            tavern_pile: Vec::new(),
            removed: Vec::new(),
            effects: Default::default(),
            pending: None,
            rng: MatchRng::seed_from_u64(seed),
            next_instance: 0,
            endgame: Endgame::Normal,
        };
        for seat in Seat::BOTH {
            let mut deck = Vec::with_capacity(10);
            for p in picks {
                let starter = cards.starter(p).ok_or_else(|| {
                    RulesError::InvalidDraft(format!("card set has no starter for {p}"))
                })?;
                deck.push(state.fresh_instance(starter));
            }
            for _ in 0..STARTING_GOLD {
                deck.push(state.fresh_instance(cards.gold()));
            }
            state.players[seat.index()].draw_pile = deck;
        }
        let mut pile = Vec::new();
        for deck in picks.into_iter().chain(std::iter::once(PatronId::Treasury)) {
            for card in cards.tavern_cards(deck) {
                pile.push(state.fresh_instance(card));
            }
        }
        state.tavern_pile = pile;

        for seat in Seat::BOTH {
            let p = &mut state.players[seat.index()];
            p.draw_pile.shuffle(&mut state.rng);
            for _ in 0..HAND_SIZE {
                if let Some(c) = p.draw_pile.pop() {
                    p.hand.push(c);
                }
            }
        }
        state.tavern_pile.shuffle(&mut state.rng);
        for _ in 0..TAVERN_SIZE {
            if let Some(c) = state.tavern_pile.pop() {
                state.tavern.push(c);
            }
        }
        state.players[Seat::Second.index()].first_turn_coin = true;
        state.start_turn(&mut NoEvents);
        Ok(state)
    }

    /// All legal moves, in a stable order. Empty once the match is over.
    ///
    /// While a choice is pending only `MAKE_CHOICE` moves are returned.
    pub fn legal_moves(&self) -> Vec<Move> {
        if self.is_finished() {
            return Vec::new();
        }
        if let Some(choice) = &self.pending {
            return choice_selections(self, choice).into_iter().map(Move::MakeChoice).collect();
        }
        let me = self.current_player();
        let opp = self.opponent_player();
        let mut moves = Vec::with_capacity(me.hand.len() + me.board.len() + TAVERN_SIZE + 4);
        moves.extend(me.hand.iter().map(|c| Move::PlayCard(c.id)));
        moves.extend(me.board.iter().filter(|c| !c.activated).map(|c| Move::ActivateAgent(c.id)));
        if me.power > 0 {
            moves.extend(opp.board.iter().map(|c| Move::AttackAgent(c.id)));
        }
        for (slot, c) in self.tavern.iter().enumerate() {
            if self.spec(c.card).cost as u32 <= me.coins {
                moves.push(Move::BuyCard(slot as u8));
            }
        }
        for p in &self.patrons {
            if self.can_activate_patron(p.patron) {
                moves.push(Move::ActivatePatron(p.patron));
            }
        }
        moves.push(Move::EndTurn);
        moves
    }

    /// Applies `mv`, reporting every consequence to `sink`.
    pub fn apply_move(&mut self, mv: &Move, sink: &mut impl EventSink) -> Result<(), RulesError> {
        if self.is_finished() {
            return Err(RulesError::MatchFinished);
        }
        if self.pending.is_some() && !matches!(mv, Move::MakeChoice(_)) {
            return Err(illegal(mv, "a pending choice must be resolved first"));
        }
        let me = self.current;
        match mv {
            Move::PlayCard(id) => {
                let p = &mut self.players[me.index()];
                let pos = p.hand.iter().position(|c| c.id == *id).ok_or_else(|| illegal(mv, "card not in hand"))?;
                let card = p.hand.remove(pos);
                sink.emit(Event::Play { seat: me, instance: card.id, card: card.card, source: PlaySource::Hand });
                if self.spec(card.card).kind.is_agent() {
                    self.summon(card);
                } else {
                    self.players[me.index()].played.push(card);
                }
                self.use_card(card, sink);
                self.resolve_effects(sink);
            }
            Move::ActivateAgent(id) => {
                let p = &mut self.players[me.index()];
                let agent = p
                    .board
                    .iter_mut()
                    .find(|c| c.id == *id)
                    .ok_or_else(|| illegal(mv, "agent not on own board"))?;
                if agent.activated {
                    return Err(illegal(mv, "agent already used this turn"));
                }
                agent.activated = true;
                let card = *agent;
                sink.emit(Event::Play { seat: me, instance: card.id, card: card.card, source: PlaySource::Agent });
                self.use_card(card, sink);
                self.resolve_effects(sink);
            }
            Move::AttackAgent(id) => {
                let opp = me.other();
                let pos = self.players[opp.index()]
                    .board
                    .iter()
                    .position(|c| c.id == *id)
                    .ok_or_else(|| illegal(mv, "target not on opponent board"))?;
                if self.players[me.index()].power == 0 {
                    return Err(illegal(mv, "no power to attack with"));
                }
                self.attack(opp, pos, false, sink);
            }
            Move::BuyCard(slot) => {
                let slot = *slot as usize;
                let card = *self.tavern.get(slot).ok_or_else(|| illegal(mv, "no such tavern slot"))?;
                let cost = self.spec(card.card).cost as u32;
                let p = &mut self.players[me.index()];
                if cost > p.coins {
                    return Err(illegal(mv, "not enough coins"));
                }
                p.coins -= cost;
                sink.emit(Event::Buy { seat: me, instance: card.id, card: card.card, slot: slot as u8, paid: cost });
                let card = self.take_from_tavern(slot, sink);
                self.route_acquired(card, sink);
                self.resolve_effects(sink);
            }
            Move::ActivatePatron(patron) => {
                if !self.patrons.iter().any(|p| p.patron == *patron) {
                    return Err(illegal(mv, "patron not in this match"));
                }
                if !self.can_activate_patron(*patron) {
                    return Err(illegal(mv, "patron cannot be activated"));
                }
                self.activate_patron(*patron, sink);
            }
            Move::EndTurn => self.end_turn(sink),
            Move::MakeChoice(picks) => {
                let choice = self.pending.as_ref().ok_or_else(|| illegal(mv, "no pending choice"))?;
                if !choice.accepts(picks) {
                    return Err(illegal(mv, "selection does not fit the pending choice"));
                }
                self.resolve_choice(picks, sink);
            }
        }
        Ok(())
    }

    /// Functional form of [`MatchState::apply_move`].
    pub fn apply(&self, mv: &Move) -> Result<(MatchState, Vec<crate::events::Event>), RulesError> {
        let mut next = self.clone();
        let mut events = Vec::new();
        next.apply_move(mv, &mut events)?;
        Ok((next, events))
    }
}
