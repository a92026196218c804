//! Small deterministic positions and a brute-force search over them.

#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tribute_agents::{evaluate, TierList, WeightSet};
use tribute_core::{CardKind, CardSet, MatchState, Move, NoEvents, PatronId, Scenario, Seat};

pub struct Oracle {
    pub weights: WeightSet,
    pub tiers: TierList,
    pub nodes: usize,
    pub limit: usize,
}

impl Oracle {
    pub fn new(cards: &CardSet, limit: usize) -> Self {
        Oracle { weights: WeightSet::default(), tiers: TierList::from_card_set(cards), nodes: 0, limit }
    }

    /// Value of the best way to finish the turn, or `None` past the node
    /// limit.
    fn value(&mut self, state: &MatchState, seat: Seat, turn: u32) -> Option<f64> {
        if state.is_finished() || state.turn() != turn || state.current_seat() != seat {
            return Some(evaluate(state, seat, &self.weights, &self.tiers));
        }
        let mut best = f64::NEG_INFINITY;
        for mv in state.legal_moves() {
            self.nodes += 1;
            if self.nodes > self.limit {
                return None;
            }
            let mut next = state.clone();
            next.apply_move(&mv, &mut NoEvents).expect("legal");
            best = best.max(self.value(&next, seat, turn)?);
        }
        Some(best)
    }

    /// Index of the best first move; ties go to the earliest legal move.
    pub fn best_first_move(&mut self, state: &MatchState) -> Option<(usize, f64)> {
        self.nodes = 0;
        let seat = state.current_seat();
        let turn = state.turn();
        let mut best: Option<(usize, f64)> = None;
        for (i, mv) in state.legal_moves().iter().enumerate() {
            let mut next = state.clone();
            next.apply_move(mv, &mut NoEvents).expect("legal");
            let v = self.value(&next, seat, turn)?;
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        best
    }
}

fn ids(cards: &CardSet, pred: impl Fn(&tribute_core::CardSpec) -> bool) -> Vec<String> {
    cards.iter().filter(|(_, s)| pred(s)).map(|(_, s)| s.id.clone()).collect()
}

/// A turn with no hidden information left to reveal: empty draw and
/// cooldown piles, a short known tavern pile.
pub fn micro_position(cards: &Arc<CardSet>, seed: u64) -> MatchState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut decks = PatronId::DRAFTABLE.to_vec();
    decks.shuffle(&mut rng);
    let picks = [decks[0], decks[1], decks[2], decks[3]];
    let playable = ids(cards, |s| {
        s.copies > 0 && matches!(s.kind, CardKind::Action | CardKind::Agent | CardKind::Starter)
    });
    let market = ids(cards, |s| s.copies > 0 && s.kind != CardKind::Starter);
    let agents = ids(cards, |s| s.copies > 0 && s.kind == CardKind::Agent);
    let pick = |rng: &mut ChaCha8Rng, pool: &[String], n: usize| -> Vec<String> {
        (0..n).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect()
    };
    let n = rng.gen_range(2..=3);
    let hand = pick(&mut rng, &playable, n);
    let tavern = pick(&mut rng, &market, 5);
    let pile = pick(&mut rng, &market, 3);
    let n = rng.gen_range(0..=1);
    let theirs = pick(&mut rng, &agents, n);
        let coins = rng.gen_range(0..=5);
    let power = rng.gen_range(0..=3);
    let prestige = rng.gen_range(0..=35);
    Scenario::new(cards.clone(), picks, seed)
        .expect("valid picks")
        .hand(Seat::First, &refs(&hand))
        .tavern(&refs(&tavern))
        .tavern_pile(&refs(&pile))
        .board(Seat::Second, &refs(&theirs))
        .resources(Seat::First, coins, power, prestige)
        .resources(Seat::Second, 0, 0, rng.gen_range(0..=30))
        .to_move(Seat::First)
        .turn(7)
        .build()
}

/// First `count` micro-positions whose full turn tree fits in `limit`
/// nodes, with the oracle's answer.
pub fn oracle_positions(cards: &Arc<CardSet>, count: usize, limit: usize) -> Vec<(MatchState, usize, f64)> {
    let mut oracle = Oracle::new(cards, limit);
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < count {
        let state = micro_position(cards, seed);
        seed += 1;
        if state.legal_moves().len() < 2 {
            continue;
        }
        if let Some((i, v)) = oracle.best_first_move(&state) {
            out.push((state, i, v));
        }
        assert!(seed < 100 * count as u64, "too few tractable positions");
    }
    out
}

pub fn first_move(state: &MatchState, i: usize) -> Move {
    state.legal_moves()[i].clone()
}

fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}
