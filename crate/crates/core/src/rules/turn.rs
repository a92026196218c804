//! End-of-turn procedure, turn start and prestige-based endings.

use crate::cards::{CardKind, PatronId};
use crate::events::{Event, EventSink, Transfer};
use crate::moves::{EffectAction, QueuedEffect};
use crate::state::{
    EndReason, Endgame, MatchState, Outcome, Seat, HAND_SIZE, PRESTIGE_WIN, SUDDEN_DEATH_PRESTIGE, TURN_LIMIT,
};

impl MatchState {
    /// Closes the current player's turn and opens the opponent's.
    pub(crate) fn end_turn(&mut self, sink: &mut impl EventSink) {
        let me = self.current;
        let opp = me.other();

        // Unspent power is forced into opposing taunt agents first.
        let mut pos = 0;
        while pos < self.players[opp.index()].board.len() && self.players[me.index()].power > 0 {
            let agent = self.players[opp.index()].board[pos];
            if self.spec(agent.card).taunt {
                self.attack(opp, pos, true, sink);
                if self.players[opp.index()].board.get(pos).map(|c| c.id) == Some(agent.id) {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }

        let p = &mut self.players[me.index()];
        let converted = std::mem::take(&mut p.power);
        p.prestige += converted;
        p.coins = 0;

        let played = std::mem::take(&mut self.players[me.index()].played);
        for card in played {
            if self.spec(card.card).kind == CardKind::ContractAction {
                sink.emit(Event::Zone { seat: me, instance: card.id, card: card.card, transfer: Transfer::Expire });
                self.removed.push(card);
            } else {
                self.players[me.index()].cooldown.push(card);
            }
        }
        let p = &mut self.players[me.index()];
        for card in std::mem::take(&mut p.hand) {
            sink.emit(Event::Zone { seat: me, instance: card.id, card: card.card, transfer: Transfer::Cleanup });
            p.cooldown.push(card);
        }
        sink.emit(Event::TurnEnd { seat: me, turn: self.turn, prestige: p.prestige, converted });

        if let Some(outcome) = self.prestige_verdict(sink) {
            self.finish(outcome, sink);
            return;
        }

        self.draw_cards(me, HAND_SIZE, sink);
        self.current = opp;
        self.turn += 1;
        if self.turn > TURN_LIMIT {
            self.finish(Outcome::draw(), sink);
            return;
        }
        self.combo = [0; 7];
        self.used.clear();
        self.start_turn(sink);
    }

    /// Applies the prestige thresholds for the player whose turn just ended.
    fn prestige_verdict(&mut self, sink: &mut impl EventSink) -> Option<Outcome> {
        let me = self.current;
        let opp = me.other();
        let mine = self.players[me.index()].prestige;
        let theirs = self.players[opp.index()].prestige;
        if mine >= PRESTIGE_WIN {
            return Some(Outcome::win(me, EndReason::Prestige80));
        }
        if matches!(self.endgame, Endgame::SuddenDeath(leader) if self.players[leader.index()].prestige < SUDDEN_DEATH_PRESTIGE)
        {
            self.endgame = Endgame::Normal;
        }
        match self.endgame {
            Endgame::SuddenDeath(leader) if leader == opp => {
                if mine <= theirs {
                    return Some(Outcome::win(opp, EndReason::SuddenDeath));
                }
                if mine >= SUDDEN_DEATH_PRESTIGE {
                    self.endgame = Endgame::SuddenDeath(me);
                    sink.emit(Event::SuddenDeath { leader: me });
                } else {
                    self.endgame = Endgame::Normal;
                }
            }
            _ => {
                if mine >= SUDDEN_DEATH_PRESTIGE && mine > theirs {
                    if self.endgame != Endgame::SuddenDeath(me) {
                        sink.emit(Event::SuddenDeath { leader: me });
                    }
                    self.endgame = Endgame::SuddenDeath(me);
                }
            }
        }
        None
    }

    /// Start-of-turn bookkeeping and deferred effects for the current player.
    pub(crate) fn start_turn(&mut self, sink: &mut impl EventSink) {
        let seat: Seat = self.current;
        sink.emit(Event::TurnStart { seat, turn: self.turn });
        let ansei = self.patron(PatronId::Ansei).is_some_and(|p| p.favors(seat));
        let p = &mut self.players[seat.index()];
        p.prestige_at_turn_start = p.prestige;
        p.patron_calls = 1;
        for agent in &mut p.board {
            agent.activated = false;
        }
        if std::mem::take(&mut p.first_turn_coin) {
            p.coins += 1;
        }
        if ansei {
            p.coins += 1;
        }
        let owed = std::mem::take(&mut p.owed_discard);
        if owed > 0 {
            self.effects
                .push_back(QueuedEffect { action: EffectAction::DiscardFromHand { count: owed }, source: None });
            self.resolve_effects(sink);
        }
    }
}
