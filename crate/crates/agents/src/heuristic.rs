//! Weighted-feature evaluation of a position from one seat's perspective.
//!
//! Scores are generic over the float type. Won positions score positive
//! infinity and lost ones negative infinity, so no weighting can make a
//! regular position outrank a decided one.

use num_traits::Float;
use serde::Deserialize;
use thiserror::Error;
use tribute_core::{CardKind, MatchState, PatronId, Seat};

use crate::tiers::TierList;

/// Below this prestige (held at the start of the evaluated player's turn)
/// the deck-building features count.
pub const EARLY_GAME_PRESTIGE: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Weights<F> {
    pub prestige: F,
    pub power: F,
    pub opponent_prestige: F,
    /// Per patron favoring the player, minus per patron favoring the opponent.
    pub patron_favor: F,
    /// Applied when the opponent holds three favors.
    pub favor_threat: F,
    pub own_agents: F,
    pub opponent_agents: F,
    pub deck_tier: F,
    pub deck_concentration: F,
    pub tavern_tier: F,
    pub tavern_synergy: F,
}

impl<F: Float> Default for Weights<F> {
    fn default() -> Self {
        let f = |x: f64| F::from(x).expect("weight fits the float type");
        Weights {
            prestige: f(1.0),
            power: f(1.0),
            opponent_prestige: f(-1.0),
            patron_favor: f(2.5),
            favor_threat: f(-12.0),
            own_agents: f(2.0),
            opponent_agents: f(-2.0),
            deck_tier: f(1.5),
            deck_concentration: f(0.4),
            tavern_tier: f(-0.2),
            tavern_synergy: f(-0.1),
        }
    }
}

impl<F: Float> Weights<F> {
    pub fn zero() -> Self {
        let z = F::zero();
        Weights {
            prestige: z,
            power: z,
            opponent_prestige: z,
            patron_favor: z,
            favor_threat: z,
            own_agents: z,
            opponent_agents: z,
            deck_tier: z,
            deck_concentration: z,
            tavern_tier: z,
            tavern_synergy: z,
        }
    }
}

#[derive(Debug, Error)]
#[error("invalid weight file: {0}")]
pub struct WeightsError(#[from] toml::de::Error);

impl<F: Float + for<'de> Deserialize<'de>> Weights<F> {
    /// Parses `name = value` lines (TOML). Missing keys keep their default;
    /// unknown keys are an error.
    pub fn from_toml(text: &str) -> Result<Self, WeightsError> {
        Ok(toml::from_str(text)?)
    }
}

/// Raw feature values, before weighting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Features<F> {
    pub prestige: F,
    pub power: F,
    pub opponent_prestige: F,
    pub patron_favor: F,
    pub favor_threat: F,
    pub early_game: bool,
    pub own_agents: F,
    pub opponent_agents: F,
    pub deck_tier: F,
    pub deck_concentration: F,
    pub tavern_tier: F,
    pub tavern_synergy: F,
}

fn num<F: Float>(x: u32) -> F {
    F::from(x).unwrap_or_else(F::zero)
}

pub fn features<F: Float>(state: &MatchState, seat: Seat, tiers: &TierList) -> Features<F> {
    let me = state.player(seat);
    let opp = state.player(seat.other());
    let mut favor: i32 = 0;
    let mut opp_favors = 0;
    for p in state.patrons() {
        if p.favors(seat) {
            favor += 1;
        } else if p.favors(seat.other()) {
            favor -= 1;
            opp_favors += 1;
        }
    }
    let early_game = me.prestige_at_turn_start < EARLY_GAME_PRESTIGE;
    let mut out = Features {
        prestige: num(me.prestige),
        power: num(me.power),
        opponent_prestige: num(opp.prestige),
        patron_favor: F::from(favor).unwrap_or_else(F::zero),
        favor_threat: if opp_favors >= 3 { F::one() } else { F::zero() },
        early_game,
        own_agents: F::zero(),
        opponent_agents: F::zero(),
        deck_tier: F::zero(),
        deck_concentration: F::zero(),
        tavern_tier: F::zero(),
        tavern_synergy: F::zero(),
    };
    if !early_game {
        return out;
    }
    let board = |cards: &[tribute_core::CardInstance]| -> u32 {
        cards.iter().map(|c| tiers.value(c.card) + c.health as u32).sum()
    };
    out.own_agents = num(board(&me.board));
    out.opponent_agents = num(board(&opp.board));

    let mut mine = [0u32; 7];
    let mut theirs = [0u32; 7];
    let mut deck_tier = 0;
    let mut owned = 0;
    for c in me.owned() {
        let spec = state.spec(c.card);
        if spec.kind == CardKind::ContractAction {
            continue;
        }
        owned += 1;
        deck_tier += tiers.value(c.card);
        mine[spec.deck.index()] += 1;
    }
    for c in opp.owned() {
        theirs[state.spec(c.card).deck.index()] += 1;
    }
    out.deck_tier = num(deck_tier);
    let treasury = PatronId::Treasury.index();
    let concentration: u32 = mine.iter().enumerate().filter(|(d, _)| *d != treasury).map(|(_, n)| n * n).sum();
    out.deck_concentration = num::<F>(concentration) / num::<F>(owned.max(1));
    for c in state.tavern() {
        out.tavern_tier = out.tavern_tier + num(tiers.value(c.card));
        let deck = state.spec(c.card).deck.index();
        if deck != treasury {
            out.tavern_synergy = out.tavern_synergy + num(theirs[deck]);
        }
    }
    out
}

/// Scores `state` for `seat`.
pub fn evaluate<F: Float>(state: &MatchState, seat: Seat, weights: &Weights<F>, tiers: &TierList) -> F {
    if let Some(outcome) = state.outcome() {
        return match outcome.winner {
            Some(w) if w == seat => F::infinity(),
            Some(_) => F::neg_infinity(),
            None => F::zero(),
        };
    }
    let x = features::<F>(state, seat, tiers);
    let w = weights;
    let mut score = w.prestige * x.prestige
        + w.power * x.power
        + w.opponent_prestige * x.opponent_prestige
        + w.patron_favor * x.patron_favor
        + w.favor_threat * x.favor_threat;
    if x.early_game {
        score = score
            + w.own_agents * x.own_agents
            + w.opponent_agents * x.opponent_agents
            + w.deck_tier * x.deck_tier
            + w.deck_concentration * x.deck_concentration
            + w.tavern_tier * x.tavern_tier
            + w.tavern_synergy * x.tavern_synergy;
    }
    score
}
