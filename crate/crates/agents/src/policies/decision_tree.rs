//! A fixed rule cascade over the visible board.

use std::time::Duration;

use tribute_core::{
    CardIdx, CardKind, ChoiceKind, ChoiceOption, Favor, Keyword, Leaf, MatchState, Move, PatronId, PlayerView, Seat,
};

use crate::heuristic::EARLY_GAME_PRESTIGE;
use crate::sdk::Agent;
use crate::tiers::TierList;

const PATRON_PREFERENCE: [PatronId; 6] =
    [PatronId::Pelin, PatronId::RedEagle, PatronId::Crows, PatronId::Ansei, PatronId::Hlaalu, PatronId::Rajhin];

struct Ctx<'a> {
    state: &'a MatchState,
    seat: Seat,
    tiers: &'a TierList,
    early: bool,
}

impl Ctx<'_> {
    fn value(&self, card: CardIdx) -> f64 {
        self.tiers.value(card) as f64 + 1.0
    }

    /// How many cards of `card`'s deck `seat` owns.
    fn affinity(&self, seat: Seat, card: CardIdx) -> f64 {
        let deck = self.state.spec(card).deck;
        if deck == PatronId::Treasury {
            return 0.0;
        }
        self.state.player(seat).owned().filter(|c| self.state.spec(c.card).deck == deck).count() as f64
    }

    fn favors(&self, seat: Seat) -> usize {
        self.state.favor_count(seat)
    }

    fn leaf_value(&self, leaf: Leaf) -> f64 {
        let n = leaf.amount as f64;
        match leaf.keyword {
            Keyword::Coin => n * if self.early { 1.2 } else { 0.8 },
            Keyword::Power => n * if self.early { 1.0 } else { 1.3 },
            Keyword::OppLosePrestige => n * 1.1,
            _ => n,
        }
    }

    fn buy_score(&self, card: CardIdx) -> Option<f64> {
        let spec = self.state.spec(card);
        let tier = self.tiers.tier(card);
        if spec.kind == CardKind::ContractAction {
            // Treasury contracts pay off at once; worth it only late.
            return (!self.early).then(|| {
                let power: f64 = spec
                    .effect(1)
                    .into_iter()
                    .flat_map(|e| e.leaves())
                    .map(|l| if l.keyword == Keyword::Power { l.amount as f64 } else { 0.5 })
                    .sum();
                power + 1.0
            });
        }
        if tier >= 5 || (!self.early && tier >= 4) {
            return None;
        }
        let board_bonus = if spec.kind.is_agent() { 3.0 } else { 0.0 };
        Some(self.value(card) * 2.0 + self.affinity(self.seat, card) + board_bonus)
    }

    fn option_score(&self, kind: ChoiceKind, option: &ChoiceOption) -> f64 {
        let card = match option {
            ChoiceOption::Effect(leaf) => return self.leaf_value(*leaf),
            ChoiceOption::Card(id) => match self.state.locate(*id) {
                Some((_, c)) => *c,
                None => return 0.0,
            },
        };
        let spec = self.state.spec(card.card);
        let value = self.value(card.card);
        match kind {
            ChoiceKind::Acquire { .. } => value * 2.0 + self.affinity(self.seat, card.card),
            ChoiceKind::Destroy => {
                if card.card == self.state.cards().bewilderment() {
                    3.0
                } else if self.tiers.tier(card.card) >= 5 && !spec.kind.is_agent() && !self.early {
                    0.5
                } else {
                    -value
                }
            }
            ChoiceKind::Discard => -value,
            ChoiceKind::Knockout => value + card.health as f64,
            ChoiceKind::Replace => self.affinity(self.seat.other(), card.card) - self.affinity(self.seat, card.card),
            ChoiceKind::Return | ChoiceKind::PatronReturnAgent => value,
            ChoiceKind::Sacrifice { patron: PatronId::Hlaalu } => spec.cost as f64,
            ChoiceKind::Sacrifice { .. } => -value,
            ChoiceKind::EffectBranch => 0.0,
        }
    }
}

fn resolve_choice(ctx: &Ctx, legal: &[Move]) -> usize {
    let choice = ctx.state.pending_choice().expect("choice pending");
    let scores: Vec<f64> = choice.options.iter().map(|o| ctx.option_score(choice.kind, o)).collect();
    let mut best = (0, f64::NEG_INFINITY);
    for (i, mv) in legal.iter().enumerate() {
        let Move::MakeChoice(picks) = mv else { continue };
        let total: f64 = picks.iter().map(|&p| scores[p as usize]).sum();
        if total > best.1 {
            best = (i, total);
        }
    }
    best.0
}

fn find(legal: &[Move], pred: impl Fn(&Move) -> bool) -> Option<usize> {
    legal.iter().position(pred)
}

/// Deterministic move choice from the view alone.
pub fn decision_tree_choice(view: &PlayerView, legal: &[Move], tiers: &TierList) -> usize {
    if legal.len() == 1 {
        return 0;
    }
    let state = view.state();
    let seat = view.seat();
    let me = state.player(seat);
    let ctx = Ctx { state, seat, tiers, early: me.prestige < EARLY_GAME_PRESTIGE };
    if state.pending_choice().is_some() {
        return resolve_choice(&ctx, legal);
    }
    let patron_move = |want: &dyn Fn(Favor) -> bool| {
        find(legal, |m| match m {
            Move::ActivatePatron(p) if *p != PatronId::Treasury => state.patron(*p).is_some_and(|s| want(s.favor)),
            _ => false,
        })
    };

    // Take a patron win.
    if ctx.favors(seat) == 3 {
        if let Some(i) = patron_move(&|f| f == Favor::Neutral) {
            return i;
        }
    }

    let spec_of = |id| state.locate(id).map(|(_, c)| state.spec(c.card));
    if let Some(i) = find(legal, |m| matches!(m, Move::PlayCard(id) if spec_of(*id).is_some_and(|s| s.deck == PatronId::Treasury))) {
        return i;
    }
    if let Some(i) = find(legal, |m| matches!(m, Move::PlayCard(_) | Move::ActivateAgent(_))) {
        return i;
    }

    // With the hand played, stop an opponent one favor from winning.
    if ctx.favors(seat.other()) >= 3 {
        if let Some(i) = patron_move(&|f| f == Favor::Favors(seat.other())) {
            return i;
        }
    }

    let opp = state.player(seat.other());
    if me.power > 0 {
        if let Some(i) = find(legal, |m| matches!(m, Move::AttackAgent(id) if opp.board.iter().any(|c| c.id == *id && state.spec(c.card).taunt))) {
            return i;
        }
        let target = opp
            .board
            .iter()
            .filter(|c| c.health as u32 <= me.power)
            .max_by(|a, b| ctx.value(a.card).total_cmp(&ctx.value(b.card)));
        if let Some(t) = target {
            if let Some(i) = find(legal, |m| *m == Move::AttackAgent(t.id)) {
                return i;
            }
        }
    }

    let mut best_buy: Option<(usize, f64)> = None;
    for (i, mv) in legal.iter().enumerate() {
        if let Move::BuyCard(slot) = mv {
            if let Some(score) = ctx.buy_score(state.tavern()[*slot as usize].card) {
                if best_buy.is_none_or(|(_, b)| score > b) {
                    best_buy = Some((i, score));
                }
            }
        }
    }
    if let Some((i, _)) = best_buy {
        return i;
    }

    if me.patron_calls > 0 {
        let has_gold = me.hand.iter().chain(&me.played).any(|c| c.card == state.cards().gold());
        if has_gold && me.coins >= 2 {
            if let Some(i) = find(legal, |m| *m == Move::ActivatePatron(PatronId::Treasury)) {
                return i;
            }
        }
        if me.coins >= 2 {
            if let Some(i) = find(legal, |m| *m == Move::ActivatePatron(PatronId::Crows)) {
                return i;
            }
        }
        if !ctx.early {
            let big = me.hand.iter().chain(&me.played).any(|c| state.spec(c.card).cost >= 4);
            if big {
                if let Some(i) = find(legal, |m| *m == Move::ActivatePatron(PatronId::Hlaalu)) {
                    return i;
                }
            }
        }
        if ctx.favors(seat) >= 2 || ctx.favors(seat.other()) >= 2 {
            let power_patron = |p: PatronId| matches!(p, PatronId::Ansei | PatronId::Pelin | PatronId::RedEagle);
            if let Some(i) = find(legal, |m| matches!(m, Move::ActivatePatron(p) if power_patron(*p) && !state.patron(*p).is_some_and(|s| s.favors(seat)))) {
                return i;
            }
        }
        if me.coins >= 3 && !state.patron(PatronId::Rajhin).is_some_and(|s| s.favors(seat)) {
            if let Some(i) = find(legal, |m| *m == Move::ActivatePatron(PatronId::Rajhin)) {
                return i;
            }
        }
    }
    find(legal, Move::is_end_turn).unwrap_or(0)
}

pub struct DecisionTreeAgent {
    tiers: Option<TierList>,
}

impl DecisionTreeAgent {
    pub fn new() -> Self {
        DecisionTreeAgent { tiers: None }
    }
}

impl Default for DecisionTreeAgent {
    fn default() -> Self {
        Self::new()
    }
}

impl Agent for DecisionTreeAgent {
    fn name(&self) -> &str {
        "decision-tree"
    }

    fn select_patron(&mut self, available: &[PatronId], _round: u8) -> PatronId {
        PATRON_PREFERENCE.into_iter().find(|p| available.contains(p)).unwrap_or(available[0])
    }

    fn play(&mut self, view: &PlayerView, legal: &[Move], _remaining: Duration) -> Move {
        let tiers = self.tiers.get_or_insert_with(|| TierList::from_card_set(view.state().cards()));
        legal[decision_tree_choice(view, legal, tiers)].clone()
    }
}
