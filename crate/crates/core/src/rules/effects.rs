//! Card use, combo triggers and keyword resolution.

use std::sync::Arc;

use rand::seq::SliceRandom;

use crate::cards::{CardKind, EffectExpr, Keyword, PatronId};
use crate::events::{Event, EventSink, PlaySource, Transfer};
use crate::moves::{ChoiceKind, ChoiceOption, EffectAction, PendingChoice, QueuedEffect};
use crate::state::{CardInstance, Endgame, InstanceId, MatchState, Outcome, Seat, UsedCard, MAX_BOARD, MAX_COMBO_SLOTS};

impl MatchState {
    /// Registers a used card with its deck's combo counter and queues the
    /// effects it unlocks: its own slots up to the new count, then the
    /// matching slot of every earlier same-deck card used this turn.
    pub(crate) fn use_card(&mut self, card: CardInstance, sink: &mut impl EventSink) {
        let cards = Arc::clone(&self.cards);
        let spec = cards.get(card.card);
        let deck = spec.deck;
        let counter = &mut self.combo[deck.index()];
        *counter = counter.saturating_add(1);
        let level = *counter as usize;
        let me = self.current;
        for l in 1..=level.min(MAX_COMBO_SLOTS) {
            if let Some(effect) = spec.effect(l) {
                if l > 1 {
                    sink.emit(Event::Combo { seat: me, deck, level: l as u8, instance: card.id, card: card.card });
                }
                self.enqueue(effect, Some(card.id));
            }
        }
        if level >= 2 && level <= MAX_COMBO_SLOTS {
            for i in 0..self.used.len() {
                let prev = self.used[i];
                let prev_spec = cards.get(prev.card);
                if prev_spec.deck != deck {
                    continue;
                }
                if let Some(effect) = prev_spec.effect(level) {
                    sink.emit(Event::Combo { seat: me, deck, level: level as u8, instance: prev.instance, card: prev.card });
                    self.enqueue(effect, Some(prev.instance));
                }
            }
        }
        self.used.push(UsedCard { instance: card.id, card: card.card });
    }

    fn enqueue(&mut self, effect: &EffectExpr, source: Option<InstanceId>) {
        match *effect {
            EffectExpr::Leaf(leaf) => {
                self.effects.push_back(QueuedEffect { action: EffectAction::Keyword { leaf }, source })
            }
            EffectExpr::And(a, b) => {
                self.effects.push_back(QueuedEffect { action: EffectAction::Keyword { leaf: a }, source });
                self.effects.push_back(QueuedEffect { action: EffectAction::Keyword { leaf: b }, source });
            }
            EffectExpr::Or(left, right) => {
                self.effects.push_back(QueuedEffect { action: EffectAction::Branch { left, right }, source })
            }
        }
    }

    /// Resolves queued effects until the queue is empty, a choice is
    /// needed, or the match ends.
    pub(crate) fn resolve_effects(&mut self, sink: &mut impl EventSink) {
        while self.pending.is_none() && !self.is_finished() {
            let Some(effect) = self.effects.pop_front() else { break };
            self.resolve_one(effect, sink);
        }
    }

    fn resolve_one(&mut self, effect: QueuedEffect, sink: &mut impl EventSink) {
        let me = self.current;
        let opp = me.other();
        let source = effect.source;
        match effect.action {
            EffectAction::Keyword { leaf } => {
                let n = leaf.amount as u32;
                match leaf.keyword {
                    Keyword::Coin => self.players[me.index()].coins += n,
                    Keyword::Power => self.players[me.index()].power += n,
                    Keyword::Patron => self.players[me.index()].patron_calls += n,
                    Keyword::OppLosePrestige => {
                        let p = &mut self.players[opp.index()];
                        p.prestige = p.prestige.saturating_sub(n);
                    }
                    Keyword::Discard => self.players[opp.index()].owed_discard += n,
                    Keyword::Heal => {
                        let cards = Arc::clone(&self.cards);
                        if let Some(agent) = self.players[me.index()].board.iter_mut().find(|c| Some(c.id) == source) {
                            let max = cards.get(agent.card).health.unwrap_or(0);
                            agent.health = agent.health.saturating_add(leaf.amount).min(max);
                        }
                    }
                    Keyword::Draw => {}
                    Keyword::Acquire
                    | Keyword::Destroy
                    | Keyword::Knockout
                    | Keyword::Replace
                    | Keyword::Return => {}
                }
                sink.emit(Event::Effect { seat: me, source, effect: leaf });
                match leaf.keyword {
                    Keyword::Draw => self.draw_cards(me, n as usize, sink),
                    Keyword::Acquire => {
                        let options: Vec<_> = self
                            .tavern
                            .iter()
                            .filter(|c| self.spec(c.card).cost <= leaf.amount)
                            .map(|c| ChoiceOption::Card(c.id))
                            .collect();
                        self.open_choice(ChoiceKind::Acquire { max_cost: leaf.amount }, options, 1, 1, false, source, sink);
                    }
                    Keyword::Destroy => {
                        let p = &self.players[me.index()];
                        let options: Vec<_> =
                            p.played.iter().chain(&p.board).map(|c| ChoiceOption::Card(c.id)).collect();
                        let max = options.len().min(n as usize) as u16;
                        self.open_choice(ChoiceKind::Destroy, options, 0, max, false, source, sink);
                    }
                    Keyword::Knockout => {
                        let options: Vec<_> =
                            self.players[opp.index()].board.iter().map(|c| ChoiceOption::Card(c.id)).collect();
                        let k = options.len().min(n as usize) as u16;
                        self.open_choice(ChoiceKind::Knockout, options, k, k, false, source, sink);
                    }
                    Keyword::Replace => {
                        let options: Vec<_> = self.tavern.iter().map(|c| ChoiceOption::Card(c.id)).collect();
                        let max = options.len().min(n as usize) as u16;
                        self.open_choice(ChoiceKind::Replace, options, 0, max, false, source, sink);
                    }
                    Keyword::Return => {
                        let options: Vec<_> =
                            self.players[me.index()].cooldown.iter().map(|c| ChoiceOption::Card(c.id)).collect();
                        let k = options.len().min(n as usize) as u16;
                        self.open_choice(ChoiceKind::Return, options, k, k, true, source, sink);
                    }
                    _ => {}
                }
            }
            EffectAction::Branch { left, right } => {
                let options = vec![ChoiceOption::Effect(left), ChoiceOption::Effect(right)];
                self.open_choice(ChoiceKind::EffectBranch, options, 1, 1, false, source, sink);
            }
            EffectAction::DiscardFromHand { count } => {
                let options: Vec<_> =
                    self.players[me.index()].hand.iter().map(|c| ChoiceOption::Card(c.id)).collect();
                let k = options.len().min(count as usize) as u16;
                self.open_choice(ChoiceKind::Discard, options, k, k, false, source, sink);
            }
            EffectAction::Sacrifice { patron } => {
                let p = &self.players[me.index()];
                let options: Vec<_> = p
                    .hand
                    .iter()
                    .chain(&p.played)
                    .filter(|c| patron != PatronId::Hlaalu || self.spec(c.card).cost >= 1)
                    .map(|c| ChoiceOption::Card(c.id))
                    .collect();
                self.open_choice(ChoiceKind::Sacrifice { patron }, options, 1, 1, false, source, sink);
            }
            EffectAction::ReturnAgent => {
                let options: Vec<_> = self.players[me.index()]
                    .cooldown
                    .iter()
                    .filter(|c| self.spec(c.card).kind == CardKind::Agent)
                    .map(|c| ChoiceOption::Card(c.id))
                    .collect();
                self.open_choice(ChoiceKind::PatronReturnAgent, options, 1, 1, false, source, sink);
            }
            EffectAction::CreateWrit => {
                let writ = self.fresh_instance(self.cards.writ_of_coin());
                sink.emit(Event::Create { seat: me, instance: writ.id, card: writ.card });
                self.players[me.index()].cooldown.push(writ);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn open_choice(
        &mut self,
        kind: ChoiceKind,
        options: Vec<ChoiceOption>,
        min_picks: u16,
        max_picks: u16,
        ordered: bool,
        source: Option<InstanceId>,
        sink: &mut impl EventSink,
    ) {
        if options.is_empty() || max_picks == 0 {
            return;
        }
        sink.emit(Event::ChoiceOpen { seat: self.current, kind, options: options.len() as u32 });
        self.pending = Some(PendingChoice { kind, options, min_picks, max_picks, ordered, source });
    }

    /// Applies a validated selection to the pending choice and continues
    /// resolving the effect queue.
    pub(crate) fn resolve_choice(&mut self, picks: &[u16], sink: &mut impl EventSink) {
        let choice = self.pending.take().expect("pending choice");
        let me = self.current;
        let opp = me.other();
        sink.emit(Event::Choice { seat: me, kind: choice.kind, picks: picks.to_vec() });
        let picked_ids = || {
            picks.iter().filter_map(|&i| match choice.options[i as usize] {
                ChoiceOption::Card(id) => Some(id),
                ChoiceOption::Effect(_) => None,
            })
        };
        match choice.kind {
            ChoiceKind::EffectBranch => {
                if let ChoiceOption::Effect(leaf) = choice.options[picks[0] as usize] {
                    self.effects.push_front(QueuedEffect { action: EffectAction::Keyword { leaf }, source: choice.source });
                }
            }
            ChoiceKind::Acquire { .. } => {
                for id in picked_ids() {
                    if let Some(slot) = self.tavern.iter().position(|c| c.id == id) {
                        let card = self.tavern[slot];
                        sink.emit(Event::Buy { seat: me, instance: card.id, card: card.card, slot: slot as u8, paid: 0 });
                        let card = self.take_from_tavern(slot, sink);
                        self.route_acquired(card, sink);
                    }
                }
            }
            ChoiceKind::Destroy => {
                for id in picked_ids() {
                    if let Some(card) = self.take_from_play(me, id) {
                        sink.emit(Event::Zone { seat: me, instance: card.id, card: card.card, transfer: Transfer::Destroy });
                        self.removed.push(reset(card));
                    }
                }
            }
            ChoiceKind::Discard => {
                for id in picked_ids() {
                    let p = &mut self.players[me.index()];
                    if let Some(pos) = p.hand.iter().position(|c| c.id == id) {
                        let card = p.hand.remove(pos);
                        sink.emit(Event::Zone { seat: me, instance: card.id, card: card.card, transfer: Transfer::Discard });
                        p.cooldown.push(card);
                    }
                }
            }
            ChoiceKind::Knockout => {
                for id in picked_ids() {
                    if let Some(pos) = self.players[opp.index()].board.iter().position(|c| c.id == id) {
                        self.players[opp.index()].board[pos].health = 0;
                        self.knock_out(opp, pos, sink);
                    }
                }
            }
            ChoiceKind::Replace => {
                for id in picked_ids() {
                    if let Some(slot) = self.tavern.iter().position(|c| c.id == id) {
                        let card = self.tavern[slot];
                        sink.emit(Event::Zone { seat: me, instance: card.id, card: card.card, transfer: Transfer::Replace });
                        self.tavern_pile.insert(0, card);
                        let next = self.tavern_pile.pop().expect("pile holds the replaced card");
                        self.tavern[slot] = next;
                        sink.emit(Event::Refill { slot: slot as u8, instance: next.id, card: next.card });
                    }
                }
            }
            ChoiceKind::Return | ChoiceKind::PatronReturnAgent => {
                let ids: Vec<_> = picked_ids().collect();
                for id in ids.into_iter().rev() {
                    let p = &mut self.players[me.index()];
                    if let Some(pos) = p.cooldown.iter().position(|c| c.id == id) {
                        let card = p.cooldown.remove(pos);
                        sink.emit(Event::Zone { seat: me, instance: card.id, card: card.card, transfer: Transfer::Return });
                        p.draw_pile.push(card);
                    }
                }
            }
            ChoiceKind::Sacrifice { patron } => {
                for id in picked_ids() {
                    let p = &mut self.players[me.index()];
                    let card = if let Some(pos) = p.hand.iter().position(|c| c.id == id) {
                        Some(p.hand.remove(pos))
                    } else {
                        p.played.iter().position(|c| c.id == id).map(|pos| p.played.remove(pos))
                    };
                    if let Some(card) = card {
                        sink.emit(Event::Zone { seat: me, instance: card.id, card: card.card, transfer: Transfer::Sacrifice });
                        if patron == PatronId::Hlaalu {
                            let gain = (self.spec(card.card).cost as u32).saturating_sub(1);
                            self.players[me.index()].prestige += gain;
                        }
                        self.removed.push(reset(card));
                    }
                }
            }
        }
        self.resolve_effects(sink);
    }

    fn take_from_play(&mut self, seat: Seat, id: InstanceId) -> Option<CardInstance> {
        let p = &mut self.players[seat.index()];
        if let Some(pos) = p.played.iter().position(|c| c.id == id) {
            return Some(p.played.remove(pos));
        }
        p.board.iter().position(|c| c.id == id).map(|pos| p.board.remove(pos))
    }

    /// Removes the card in `slot` and refills the slot from the tavern pile.
    pub(crate) fn take_from_tavern(&mut self, slot: usize, sink: &mut impl EventSink) -> CardInstance {
        let card = self.tavern[slot];
        match self.tavern_pile.pop() {
            Some(next) => {
                self.tavern[slot] = next;
                sink.emit(Event::Refill { slot: slot as u8, instance: next.id, card: next.card });
            }
            None => {
                self.tavern.remove(slot);
            }
        }
        card
    }

    /// Sends a bought or acquired card where its kind dictates. Contracts
    /// are used at once.
    pub(crate) fn route_acquired(&mut self, card: CardInstance, sink: &mut impl EventSink) {
        let me = self.current;
        match self.spec(card.card).kind {
            CardKind::ContractAction => {
                sink.emit(Event::Play { seat: me, instance: card.id, card: card.card, source: PlaySource::Contract });
                self.players[me.index()].played.push(card);
                self.use_card(card, sink);
            }
            CardKind::ContractAgent => {
                sink.emit(Event::Play { seat: me, instance: card.id, card: card.card, source: PlaySource::Contract });
                self.summon(card);
                self.use_card(card, sink);
            }
            CardKind::Starter | CardKind::Action | CardKind::Agent => {
                self.players[me.index()].cooldown.push(card);
            }
        }
    }

    /// Puts an agent on the current player's board, or into the played pile
    /// if the board is full.
    pub(crate) fn summon(&mut self, mut card: CardInstance) {
        let health = self.spec(card.card).health.unwrap_or(1);
        let p = &mut self.players[self.current.index()];
        if p.board.len() < MAX_BOARD {
            card.health = health;
            card.activated = true;
            p.board.push(card);
        } else {
            p.played.push(reset(card));
        }
    }

    /// Deals damage from the current player's power to an opponent agent.
    pub(crate) fn attack(&mut self, owner: Seat, pos: usize, automatic: bool, sink: &mut impl EventSink) {
        let me = self.current;
        let power = self.players[me.index()].power;
        let target = &mut self.players[owner.index()].board[pos];
        let damage = power.min(target.health as u32);
        target.health -= damage as u8;
        let (id, card, health) = (target.id, target.card, target.health);
        self.players[me.index()].power -= damage;
        sink.emit(Event::Attack { seat: me, target: id, card, damage, health, automatic });
        if health == 0 {
            self.knock_out(owner, pos, sink);
        }
    }

    /// Removes a defeated agent from its owner's board.
    pub(crate) fn knock_out(&mut self, owner: Seat, pos: usize, sink: &mut impl EventSink) {
        let card = reset(self.players[owner.index()].board.remove(pos));
        sink.emit(Event::Zone { seat: owner, instance: card.id, card: card.card, transfer: Transfer::Knockout });
        if self.spec(card.card).kind.is_contract() {
            self.removed.push(card);
        } else {
            self.players[owner.index()].cooldown.push(card);
        }
    }

    /// Draws up to `n` cards, reshuffling the cooldown pile when the draw
    /// pile runs out.
    pub(crate) fn draw_cards(&mut self, seat: Seat, n: usize, sink: &mut impl EventSink) {
        for _ in 0..n {
            let p = &mut self.players[seat.index()];
            if p.draw_pile.is_empty() {
                if p.cooldown.is_empty() {
                    return;
                }
                let mut pile = std::mem::take(&mut p.cooldown);
                pile.shuffle(&mut self.rng);
                sink.emit(Event::Shuffle { seat, count: pile.len() as u32 });
                p.draw_pile = pile;
            }
            let card = p.draw_pile.pop().expect("non-empty draw pile");
            sink.emit(Event::Draw { seat, instance: card.id, card: card.card });
            p.hand.push(card);
        }
    }

    pub(crate) fn finish(&mut self, outcome: Outcome, sink: &mut impl EventSink) {
        self.endgame = Endgame::Finished(outcome);
        self.pending = None;
        self.effects.clear();
        sink.emit(Event::GameEnd { outcome });
    }
}

fn reset(mut card: CardInstance) -> CardInstance {
    card.health = 0;
    card.activated = false;
    card
}
