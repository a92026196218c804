//! Patron activation.

use crate::cards::PatronId;
use crate::events::{Event, EventSink};
use crate::moves::{EffectAction, QueuedEffect};
use crate::state::{EndReason, Favor, MatchState, Outcome, PatronState, Seat};

/// Patrons that cannot be activated by the player they already favor.
pub fn blocks_favored_activation(patron: PatronId) -> bool {
    matches!(patron, PatronId::Ansei | PatronId::Crows)
}

impl MatchState {
    pub fn can_activate_patron(&self, patron: PatronId) -> bool {
        let me = self.current_player();
        if me.patron_calls == 0 {
            return false;
        }
        let Some(state) = self.patron(patron) else { return false };
        if blocks_favored_activation(patron) && state.favors(self.current) {
            return false;
        }
        match patron {
            PatronId::Ansei | PatronId::Pelin | PatronId::RedEagle => me.power >= 2,
            PatronId::Crows => me.coins >= 1,
            PatronId::Hlaalu => me.hand.iter().chain(&me.played).any(|c| self.spec(c.card).cost >= 1),
            PatronId::Rajhin => me.coins >= 3,
            PatronId::Treasury => me.coins >= 2,
        }
    }

    pub(crate) fn activate_patron(&mut self, patron: PatronId, sink: &mut impl EventSink) {
        let seat = self.current;
        let p = &mut self.players[seat.index()];
        p.patron_calls -= 1;
        let queue = |action| QueuedEffect { action, source: None };
        match patron {
            PatronId::Ansei => p.power -= 2,
            PatronId::Crows => {
                let coins = std::mem::take(&mut p.coins);
                p.power += coins - 1;
            }
            PatronId::Hlaalu => self.effects.push_back(queue(EffectAction::Sacrifice { patron })),
            PatronId::Pelin => {
                p.power -= 2;
                self.effects.push_back(queue(EffectAction::ReturnAgent));
            }
            PatronId::Rajhin => {
                p.coins -= 3;
                let card = self.fresh_instance(self.cards.bewilderment());
                sink.emit(Event::Create { seat: seat.other(), instance: card.id, card: card.card });
                self.players[seat.other().index()].cooldown.push(card);
            }
            PatronId::RedEagle => {
                p.power -= 2;
                self.draw_cards(seat, 1, sink);
            }
            PatronId::Treasury => {
                p.coins -= 2;
                self.effects.push_back(queue(EffectAction::Sacrifice { patron }));
                self.effects.push_back(queue(EffectAction::CreateWrit));
            }
        }
        let entry = self
            .patrons
            .iter_mut()
            .find(|p| p.patron == patron)
            .expect("patron is in play");
        shift_toward(entry, seat);
        sink.emit(Event::Patron { seat, patron, favor: entry.favor });
        if self.favor_count(seat) == 4 {
            self.finish(Outcome::win(seat, EndReason::PatronFavor), sink);
            return;
        }
        self.resolve_effects(sink);
    }
}

/// Moves a status patron one step toward `seat`.
fn shift_toward(state: &mut PatronState, seat: Seat) {
    state.favor = match state.favor {
        Favor::None => Favor::None,
        Favor::Neutral => Favor::Favors(seat),
        Favor::Favors(s) if s == seat => Favor::Favors(seat),
        Favor::Favors(_) => Favor::Neutral,
    };
}
