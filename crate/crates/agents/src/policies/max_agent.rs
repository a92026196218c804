//! Builds the widest board it can.

use std::time::Duration;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tribute_core::{CardKind, Move, PatronId, PlayerView};

use super::common::random_patron;
use super::random::random_policy;
use crate::sdk::Agent;
use crate::tiers::TierList;

/// Plays and activates everything first (in random order), then buys the
/// best-tier affordable agent, preferring regular agents to contract
/// ones. Otherwise any random move but END_TURN.
pub fn max_agent_choice(view: &PlayerView, legal: &[Move], tiers: &TierList, rng: &mut impl rand::Rng) -> usize {
    let uses: Vec<usize> = legal
        .iter()
        .enumerate()
        .filter(|(_, m)| matches!(m, Move::PlayCard(_) | Move::ActivateAgent(_)))
        .map(|(i, _)| i)
        .collect();
    if let Some(&i) = uses.choose(rng) {
        return i;
    }
    let state = view.state();
    let best_agent = legal
        .iter()
        .enumerate()
        .filter_map(|(i, m)| match m {
            Move::BuyCard(slot) => {
                let card = state.tavern()[*slot as usize].card;
                let kind = state.spec(card).kind;
                kind.is_agent().then(|| (i, kind == CardKind::ContractAgent, tiers.tier(card)))
            }
            _ => None,
        })
        .min_by_key(|&(i, contract, tier)| (contract, tier, i));
    if let Some((i, _, _)) = best_agent {
        return i;
    }
    random_policy(legal, rng)
}

pub struct MaxAgentAgent {
    rng: ChaCha8Rng,
    tiers: Option<TierList>,
}

impl MaxAgentAgent {
    pub fn new(seed: u64) -> Self {
        MaxAgentAgent { rng: ChaCha8Rng::seed_from_u64(seed), tiers: None }
    }
}

impl Agent for MaxAgentAgent {
    fn name(&self) -> &str {
        "max-agent"
    }

    fn select_patron(&mut self, available: &[PatronId], _round: u8) -> PatronId {
        random_patron(available, &mut self.rng)
    }

    fn play(&mut self, view: &PlayerView, legal: &[Move], _remaining: Duration) -> Move {
        let tiers = self.tiers.get_or_insert_with(|| TierList::from_card_set(view.state().cards()));
        legal[max_agent_choice(view, legal, tiers, &mut self.rng)].clone()
    }
}
